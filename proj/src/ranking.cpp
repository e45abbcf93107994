#include "psm/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "psm/csv.hpp"
#include "psm/errors.hpp"
#include "psm/parallel.hpp"
#include "psm/util.hpp"

namespace psm {

namespace {

void sort_entries(std::vector<RankEntry>& entries) {
  std::sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.token < b.token;
  });
}

std::vector<int> treatment_mask(const BinaryTermMatrix& matrix, int feature) {
  std::vector<int> mask(static_cast<size_t>(matrix.rows()), 0);
  for (int i : matrix.col(feature)) mask[static_cast<size_t>(i)] = 1;
  return mask;
}

}  // namespace

FeatureRanking rank_psm(const BinaryTermMatrix& matrix, const Vocabulary& vocab,
                        const PropensityTable& table, StatMode mode, double caliper,
                        const std::string& fingerprint, int workers) {
  if (table.n_docs != matrix.rows() || table.n_features != matrix.cols())
    throw std::runtime_error("rank_psm: propensity table does not match matrix dimensions");
  if (vocab.size() != matrix.cols())
    throw std::runtime_error("rank_psm: vocabulary does not match matrix dimensions");

  FeatureRanking ranking;
  ranking.method = RankMethod::Psm;
  ranking.fingerprint = fingerprint;
  ranking.entries.resize(static_cast<size_t>(matrix.cols()));

  const auto& labels = matrix.labels();
  parallel_for(matrix.cols(), workers, [&](int j) {
    RankEntry& entry = ranking.entries[static_cast<size_t>(j)];
    entry.feature = j;
    entry.token = vocab.terms[static_cast<size_t>(j)];
    entry.score = 0.0;
    if (table.is_skipped(j)) return;
    const MatchedPairs pairs = greedy_match(table.col(j), treatment_mask(matrix, j), caliper);
    if (pairs.pairs.empty()) return;
    entry.score = pair_statistic(pairs, labels, mode).chi_square;
  });

  sort_entries(ranking.entries);
  return ranking;
}

FeatureRanking rank_df(const BinaryTermMatrix& matrix, const Vocabulary& vocab,
                       const std::string& fingerprint) {
  if (vocab.size() != matrix.cols())
    throw std::runtime_error("rank_df: vocabulary does not match matrix dimensions");
  FeatureRanking ranking;
  ranking.method = RankMethod::Df;
  ranking.fingerprint = fingerprint;
  ranking.entries.resize(static_cast<size_t>(matrix.cols()));
  for (int j = 0; j < matrix.cols(); ++j) {
    auto& entry = ranking.entries[static_cast<size_t>(j)];
    entry.feature = j;
    entry.token = vocab.terms[static_cast<size_t>(j)];
    entry.score = static_cast<double>(matrix.col_count(j));
  }
  sort_entries(ranking.entries);
  return ranking;
}

std::vector<int> select_top(const FeatureRanking& ranking, double percent) {
  if (ranking.entries.empty()) throw std::runtime_error("select_top: empty ranking");
  if (!(percent > 0.0 && percent <= 100.0))
    throw ConfigError("select_top: percent must be in (0, 100]");
  const double v = static_cast<double>(ranking.entries.size());
  size_t k = static_cast<size_t>(std::ceil(percent / 100.0 * v));
  k = std::max<size_t>(1, std::min(k, ranking.entries.size()));
  std::vector<int> out;
  out.reserve(k);
  for (size_t i = 0; i < k; ++i) out.push_back(ranking.entries[i].feature);
  return out;
}

void write_ranking_csv(const FeatureRanking& ranking, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "rank,token,feature_id,score,method\n";
  const char* method = rank_method_name(ranking.method);
  for (size_t i = 0; i < ranking.entries.size(); ++i) {
    const auto& e = ranking.entries[i];
    out << (i + 1) << "," << csv_escape(e.token) << "," << e.feature << ","
        << format_double(e.score) << "," << method << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

FeatureRanking read_ranking_csv(const std::string& path) {
  const auto rows = read_csv_file(path);
  if (rows.empty() || rows.front() != std::vector<std::string>{"rank", "token", "feature_id",
                                                               "score", "method"}) {
    throw std::runtime_error("not a ranking csv: " + path);
  }
  FeatureRanking ranking;
  for (size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 5) throw std::runtime_error(path + ": bad row " + std::to_string(r + 1));
    RankEntry e;
    e.token = row[1];
    e.feature = std::stoi(row[2]);
    e.score = std::stod(row[3]);
    ranking.entries.push_back(std::move(e));
    if (r == 1) ranking.method = rank_method_from_name(row[4]);
  }
  return ranking;
}

const char* rank_method_name(RankMethod m) { return m == RankMethod::Psm ? "psm" : "df"; }

RankMethod rank_method_from_name(const std::string& name) {
  if (name == "psm") return RankMethod::Psm;
  if (name == "df") return RankMethod::Df;
  throw std::runtime_error("unknown ranking method: " + name);
}

void write_pairs_csv(const BinaryTermMatrix& matrix, const Vocabulary& vocab,
                     const PropensityTable& table, const Corpus& corpus, double caliper,
                     const std::string& path) {
  if (static_cast<int>(corpus.docs.size()) != matrix.rows())
    throw std::runtime_error("write_pairs_csv: corpus does not match matrix");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "feature,treatment_id,control_id,gap\n";
  for (int j = 0; j < matrix.cols(); ++j) {
    if (table.is_skipped(j)) continue;
    const MatchedPairs pairs = greedy_match(table.col(j), treatment_mask(matrix, j), caliper);
    for (const auto& p : pairs.pairs) {
      out << csv_escape(vocab.terms[static_cast<size_t>(j)]) << ","
          << csv_escape(corpus.docs[static_cast<size_t>(p.treatment)].id) << ","
          << csv_escape(corpus.docs[static_cast<size_t>(p.control)].id) << ","
          << format_double(p.gap) << "\n";
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace psm
