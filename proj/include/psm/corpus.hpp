#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace psm {

// One news item. label: 1 = fake, 0 = real (fixed polarity repo-wide).
struct Document {
  std::string id;
  std::string title;
  std::string content;
  int label = 0;
  std::string source;
};

struct Corpus {
  std::vector<Document> docs;
  std::string source;

  size_t size() const { return docs.size(); }
};

// Terms in canonical order: doc_freq descending, token ascending.
struct Vocabulary {
  std::vector<std::string> terms;
  std::vector<int> doc_freq;
  std::unordered_map<std::string, int> index;

  int size() const { return static_cast<int>(terms.size()); }
  int lookup(const std::string& token) const {
    auto it = index.find(token);
    return it == index.end() ? -1 : it->second;
  }
};

struct VocabOptions {
  int min_df = 5;
  double max_df_ratio = 0.95;
  int max_features = 2000;
  bool remove_stopwords = true;
};

// Lowercases, splits on every non-alphanumeric byte, drops tokens shorter
// than 2 characters and purely numeric tokens. Total function.
std::vector<std::string> tokenize(std::string_view text);

// The text a document contributes to the feature space: title, plus content
// when non-empty.
std::string document_text(const Document& doc);

// One JSON object per line with fields id, title, content, label, source.
// label accepts "fake"/"real" or 1/0. content and source may be omitted.
Corpus ingest_jsonl(const std::string& path);

// Adapter for the public FakeNewsNet per-source CSVs (id, news_url, title,
// tweet_ids). Bodies are not crawled, so content stays empty and the title
// is the text. Every row gets the given label and source tag.
Corpus ingest_fakenewsnet_csv(const std::string& path, int label, const std::string& source);

void write_jsonl(const Corpus& corpus, const std::string& path);

Vocabulary build_vocabulary(const Corpus& corpus, const VocabOptions& opts);

// Downsamples the majority class to the minority-class count, uniformly
// without replacement. Output keeps the original document order.
Corpus balance(const Corpus& corpus, uint64_t seed);

// Appends `other`'s documents, enforcing id uniqueness across the result.
void append_corpus(Corpus& corpus, const Corpus& other);

}  // namespace psm
