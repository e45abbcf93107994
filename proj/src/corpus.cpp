#include "psm/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"
#include "psm/csv.hpp"
#include "psm/rng.hpp"
#include "psm/stopwords.hpp"

namespace psm {

namespace {

inline bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

inline char lower_ascii(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

int parse_label(const nlohmann::json& v, size_t line_no) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "fake") return 1;
    if (s == "real") return 0;
  } else if (v.is_number_integer()) {
    const long long n = v.get<long long>();
    if (n == 1) return 1;
    if (n == 0) return 0;
  }
  throw std::runtime_error("line " + std::to_string(line_no) +
                           ": unknown label value " + v.dump());
}

std::string label_string(int label) { return label ? "fake" : "real"; }

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string cur;
  auto flush = [&]() {
    if (cur.size() >= 2) {
      bool all_digits = true;
      for (char c : cur) {
        if (c < '0' || c > '9') {
          all_digits = false;
          break;
        }
      }
      if (!all_digits) tokens.push_back(cur);
    }
    cur.clear();
  };
  for (char raw : text) {
    const char c = lower_ascii(raw);
    if (is_word_char(c)) {
      cur += c;
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

std::string document_text(const Document& doc) {
  if (doc.content.empty()) return doc.title;
  return doc.title + " " + doc.content;
}

Corpus ingest_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);

  Corpus corpus;
  std::unordered_set<std::string> seen_ids;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": malformed record: " + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string() ||
        !j.contains("title") || !j["title"].is_string() || !j.contains("label")) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": record must have string id, string title and label");
    }
    Document doc;
    doc.id = j["id"].get<std::string>();
    doc.title = j["title"].get<std::string>();
    if (j.contains("content")) {
      if (!j["content"].is_string())
        throw std::runtime_error("line " + std::to_string(line_no) + ": content must be a string");
      doc.content = j["content"].get<std::string>();
    }
    doc.label = parse_label(j["label"], line_no);
    if (j.contains("source")) {
      if (!j["source"].is_string())
        throw std::runtime_error("line " + std::to_string(line_no) + ": source must be a string");
      doc.source = j["source"].get<std::string>();
    }
    if (!seen_ids.insert(doc.id).second) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": duplicate document id '" + doc.id + "'");
    }
    corpus.docs.push_back(std::move(doc));
  }
  if (corpus.docs.empty()) throw std::runtime_error("no documents in " + path);
  if (!corpus.docs.empty()) corpus.source = corpus.docs.front().source;
  return corpus;
}

Corpus ingest_fakenewsnet_csv(const std::string& path, int label, const std::string& source) {
  const auto rows = read_csv_file(path);
  if (rows.empty()) throw std::runtime_error("empty csv file: " + path);

  const auto& header = rows.front();
  int id_col = -1, title_col = -1;
  for (size_t c = 0; c < header.size(); ++c) {
    if (header[c] == "id") id_col = static_cast<int>(c);
    if (header[c] == "title") title_col = static_cast<int>(c);
  }
  if (id_col < 0) throw std::runtime_error(path + ": missing required column 'id'");
  if (title_col < 0) throw std::runtime_error(path + ": missing required column 'title'");

  Corpus corpus;
  corpus.source = source;
  std::unordered_set<std::string> seen_ids;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](int c) -> std::string {
      return c < static_cast<int>(row.size()) ? row[static_cast<size_t>(c)] : std::string();
    };
    Document doc;
    doc.id = cell(id_col);
    doc.title = cell(title_col);
    doc.label = label;
    doc.source = source;
    if (doc.id.empty()) {
      throw std::runtime_error(path + ": row " + std::to_string(r + 1) + ": empty id");
    }
    if (!seen_ids.insert(doc.id).second) {
      throw std::runtime_error(path + ": row " + std::to_string(r + 1) +
                               ": duplicate document id '" + doc.id + "'");
    }
    corpus.docs.push_back(std::move(doc));
  }
  if (corpus.docs.empty()) throw std::runtime_error("no data rows in " + path);
  return corpus;
}

void write_jsonl(const Corpus& corpus, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  for (const auto& doc : corpus.docs) {
    nlohmann::ordered_json j;
    j["id"] = doc.id;
    j["title"] = doc.title;
    j["content"] = doc.content;
    j["label"] = label_string(doc.label);
    j["source"] = doc.source;
    out << j.dump() << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Vocabulary build_vocabulary(const Corpus& corpus, const VocabOptions& opts) {
  if (corpus.docs.empty()) throw std::runtime_error("build_vocabulary: empty corpus");
  if (!(opts.max_df_ratio > 0.0 && opts.max_df_ratio <= 1.0))
    throw std::runtime_error("build_vocabulary: max_df_ratio must be in (0, 1]");

  std::unordered_map<std::string, int> df;
  std::unordered_set<std::string> doc_terms;
  for (const auto& doc : corpus.docs) {
    doc_terms.clear();
    for (auto& tok : tokenize(document_text(doc))) doc_terms.insert(std::move(tok));
    for (const auto& tok : doc_terms) ++df[tok];
  }

  const double max_df = opts.max_df_ratio * static_cast<double>(corpus.docs.size());
  std::vector<std::pair<std::string, int>> kept;
  for (const auto& [tok, count] : df) {
    if (count < opts.min_df) continue;
    if (static_cast<double>(count) > max_df) continue;
    if (opts.remove_stopwords && is_stopword(tok)) continue;
    kept.emplace_back(tok, count);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (opts.max_features > 0 && kept.size() > static_cast<size_t>(opts.max_features)) {
    kept.resize(static_cast<size_t>(opts.max_features));
  }
  if (kept.empty()) throw std::runtime_error("build_vocabulary: resulting vocabulary is empty");

  Vocabulary vocab;
  vocab.terms.reserve(kept.size());
  vocab.doc_freq.reserve(kept.size());
  for (size_t i = 0; i < kept.size(); ++i) {
    vocab.terms.push_back(kept[i].first);
    vocab.doc_freq.push_back(kept[i].second);
    vocab.index.emplace(kept[i].first, static_cast<int>(i));
  }
  return vocab;
}

Corpus balance(const Corpus& corpus, uint64_t seed) {
  size_t n_fake = 0, n_real = 0;
  for (const auto& doc : corpus.docs) (doc.label ? n_fake : n_real)++;
  if (n_fake == 0 || n_real == 0)
    throw std::runtime_error("balance: both label classes must be present");
  if (n_fake == n_real) return corpus;

  const int majority = n_fake > n_real ? 1 : 0;
  const size_t keep_count = std::min(n_fake, n_real);

  std::vector<int> majority_positions;
  for (size_t i = 0; i < corpus.docs.size(); ++i) {
    if (corpus.docs[i].label == majority) majority_positions.push_back(static_cast<int>(i));
  }
  Rng rng(seed);
  const auto chosen = rng.sample_without_replacement(
      static_cast<int>(majority_positions.size()), static_cast<int>(keep_count));
  std::vector<char> keep(corpus.docs.size(), 0);
  for (int pos : chosen) keep[static_cast<size_t>(majority_positions[static_cast<size_t>(pos)])] = 1;

  Corpus out;
  out.source = corpus.source;
  for (size_t i = 0; i < corpus.docs.size(); ++i) {
    if (corpus.docs[i].label != majority || keep[i]) out.docs.push_back(corpus.docs[i]);
  }
  return out;
}

void append_corpus(Corpus& corpus, const Corpus& other) {
  std::unordered_set<std::string> ids;
  for (const auto& doc : corpus.docs) ids.insert(doc.id);
  for (const auto& doc : other.docs) {
    if (!ids.insert(doc.id).second) {
      throw std::runtime_error("duplicate document id across inputs: '" + doc.id + "'");
    }
    corpus.docs.push_back(doc);
  }
}

}  // namespace psm
