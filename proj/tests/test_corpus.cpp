#include <algorithm>
#include <random>

#include "doctest.h"
#include "psm/corpus.hpp"
#include "psm/matrix.hpp"
#include "psm/stopwords.hpp"
#include "psm/util.hpp"
#include "test_support.hpp"

using namespace psm;
using test_support::TempDir;
using test_support::write_file;

TEST_CASE("tokenize: lowercase, split, length and numeric filters") {
  CHECK(tokenize("Breaking: Trump CONFIRMED!") ==
        std::vector<std::string>{"breaking", "trump", "confirmed"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("a 2020 win-win") == std::vector<std::string>{"win", "win"});
  CHECK(tokenize("covid19 19covid") == std::vector<std::string>{"covid19", "19covid"});
}

TEST_CASE("tokenize: deterministic and idempotent on its own output") {
  std::mt19937_64 gen(7);
  const std::string alphabet = "aAzZ09 .,!-_#'\"\t\n";
  for (int trial = 0; trial < 50; ++trial) {
    std::string text;
    const size_t len = gen() % 60;
    for (size_t i = 0; i < len; ++i) text += alphabet[gen() % alphabet.size()];
    const auto first = tokenize(text);
    CHECK(tokenize(text) == first);
    CHECK(tokenize(join(first, " ")) == first);
  }
}

TEST_CASE("ingest_jsonl: happy path preserves file order") {
  TempDir dir("jsonl");
  write_file(dir.file("c.jsonl"),
             R"({"id":"a","title":"One","content":"x","label":"fake","source":"s"})"
             "\n"
             R"({"id":"b","title":"Two","content":"","label":"real","source":"s"})"
             "\n"
             R"({"id":"c","title":"Three","content":"y","label":1,"source":"s"})"
             "\n");
  const Corpus corpus = ingest_jsonl(dir.file("c.jsonl"));
  REQUIRE(corpus.docs.size() == 3);
  CHECK(corpus.docs[0].id == "a");
  CHECK(corpus.docs[1].id == "b");
  CHECK(corpus.docs[2].id == "c");
  CHECK(corpus.docs[0].label == 1);
  CHECK(corpus.docs[1].label == 0);
  CHECK(corpus.docs[2].label == 1);
}

TEST_CASE("ingest_jsonl: unknown label names the line") {
  TempDir dir("jsonl_label");
  write_file(dir.file("c.jsonl"),
             R"({"id":"a","title":"One","content":"","label":"real","source":"s"})"
             "\n"
             R"({"id":"b","title":"Two","content":"","label":"unknown","source":"s"})"
             "\n");
  CHECK_THROWS_WITH_AS(ingest_jsonl(dir.file("c.jsonl")),
                       doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("ingest_jsonl: duplicate id rejected") {
  TempDir dir("jsonl_dup");
  write_file(dir.file("c.jsonl"),
             R"({"id":"a","title":"One","content":"","label":0,"source":"s"})"
             "\n"
             R"({"id":"a","title":"Two","content":"","label":1,"source":"s"})"
             "\n");
  CHECK_THROWS_WITH_AS(ingest_jsonl(dir.file("c.jsonl")),
                       doctest::Contains("duplicate"), std::runtime_error);
}

TEST_CASE("ingest_jsonl: malformed line names the line number") {
  TempDir dir("jsonl_bad");
  write_file(dir.file("c.jsonl"),
             R"({"id":"a","title":"One","content":"","label":0,"source":"s"})"
             "\n"
             "{not json\n");
  CHECK_THROWS_WITH_AS(ingest_jsonl(dir.file("c.jsonl")),
                       doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("ingest_fakenewsnet_csv: constant label, quoted titles") {
  TempDir dir("fnn");
  write_file(dir.file("fake.csv"),
             "id,news_url,title,tweet_ids\n"
             "p1,http://x.test/a,\"Shock, horror: a \"\"story\"\"\",1 2 3\n"
             "p2,http://x.test/b,Plain title,\n");
  const Corpus corpus = ingest_fakenewsnet_csv(dir.file("fake.csv"), 1, "politifact");
  REQUIRE(corpus.docs.size() == 2);
  CHECK(corpus.docs[0].title == "Shock, horror: a \"story\"");
  CHECK(corpus.docs[0].content.empty());
  for (const auto& doc : corpus.docs) {
    CHECK(doc.label == 1);
    CHECK(doc.source == "politifact");
  }
}

TEST_CASE("ingest_fakenewsnet_csv: missing title column is an error") {
  TempDir dir("fnn_miss");
  write_file(dir.file("bad.csv"), "id,news_url,tweet_ids\np1,u,1\n");
  CHECK_THROWS_WITH_AS(ingest_fakenewsnet_csv(dir.file("bad.csv"), 1, "s"),
                       doctest::Contains("title"), std::runtime_error);
}

namespace {

Corpus tiny_corpus(const std::vector<std::string>& texts, const std::vector<int>& labels = {}) {
  Corpus corpus;
  for (size_t i = 0; i < texts.size(); ++i) {
    Document doc;
    doc.id = "d" + std::to_string(i);
    doc.title = texts[i];
    doc.label = labels.empty() ? static_cast<int>(i % 2) : labels[i];
    corpus.docs.push_back(doc);
  }
  return corpus;
}

}  // namespace

TEST_CASE("build_vocabulary: min_df filter") {
  const Corpus corpus = tiny_corpus({"a big win", "big loss", "big day"});
  VocabOptions opts;
  opts.min_df = 2;
  opts.max_df_ratio = 1.0;
  opts.max_features = 0;  // unlimited
  opts.remove_stopwords = false;
  const Vocabulary vocab = build_vocabulary(corpus, opts);
  REQUIRE(vocab.size() == 1);
  CHECK(vocab.terms[0] == "big");
  CHECK(vocab.doc_freq[0] == 3);
}

TEST_CASE("build_vocabulary: max_df_ratio excludes too-common terms") {
  const Corpus corpus = tiny_corpus({"a big win", "big loss", "big day"});
  VocabOptions opts;
  opts.min_df = 1;
  opts.max_df_ratio = 0.9;
  opts.max_features = 0;
  opts.remove_stopwords = false;
  const Vocabulary vocab = build_vocabulary(corpus, opts);
  CHECK(vocab.terms == std::vector<std::string>{"day", "loss", "win"});
}

TEST_CASE("build_vocabulary: max_features keeps highest df, ties alphabetical") {
  const Corpus corpus = tiny_corpus({"win day", "win loss"});
  VocabOptions opts;
  opts.min_df = 1;
  opts.max_df_ratio = 1.0;
  opts.max_features = 2;
  opts.remove_stopwords = false;
  const Vocabulary vocab = build_vocabulary(corpus, opts);
  CHECK(vocab.terms == std::vector<std::string>{"win", "day"});
}

TEST_CASE("build_vocabulary: stopwords removed when enabled") {
  const Corpus corpus = tiny_corpus({"the trump story", "the trump tale", "the trump saga"});
  VocabOptions opts;
  opts.min_df = 1;
  opts.max_df_ratio = 1.0;
  opts.max_features = 0;
  opts.remove_stopwords = true;
  const Vocabulary vocab = build_vocabulary(corpus, opts);
  CHECK(vocab.lookup("the") == -1);
  CHECK(vocab.lookup("trump") >= 0);
  CHECK(is_stopword("the"));
}

TEST_CASE("build_vocabulary: order invariant under document shuffling") {
  std::mt19937_64 gen(11);
  std::vector<std::string> texts;
  const std::vector<std::string> words = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta"};
  for (int i = 0; i < 30; ++i) {
    std::string t;
    for (const auto& w : words) {
      if (gen() % 3 == 0) t += w + " ";
    }
    texts.push_back(t);
  }
  Corpus corpus = tiny_corpus(texts);
  VocabOptions opts;
  opts.min_df = 1;
  opts.max_df_ratio = 1.0;
  opts.max_features = 0;
  opts.remove_stopwords = false;
  const Vocabulary before = build_vocabulary(corpus, opts);
  std::shuffle(corpus.docs.begin(), corpus.docs.end(), gen);
  const Vocabulary after = build_vocabulary(corpus, opts);
  CHECK(before.terms == after.terms);
  CHECK(before.doc_freq == after.doc_freq);
}

TEST_CASE("vectorize: binary presence, empty rows, shape") {
  Corpus corpus = tiny_corpus({"trump makes trump", "nothing here"});
  Vocabulary vocab;
  vocab.terms = {"trump", "makes"};
  vocab.doc_freq = {1, 1};
  vocab.index = {{"trump", 0}, {"makes", 1}};
  const BinaryTermMatrix m = vectorize(corpus, vocab);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m.dense_row(0) == std::vector<int>{1, 1});
  CHECK(m.dense_row(1) == std::vector<int>{0, 0});
}

TEST_CASE("vectorize: no constant columns when vocab comes from the same corpus") {
  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::string> texts;
    const std::vector<std::string> words = {"aa", "bb", "cc", "dd", "ee"};
    for (int i = 0; i < 20; ++i) {
      std::string t = "common ";
      for (const auto& w : words) {
        if (gen() % 2 == 0) t += w + " ";
      }
      texts.push_back(t);
    }
    const Corpus corpus = tiny_corpus(texts);
    VocabOptions opts;
    opts.min_df = 1;
    opts.max_df_ratio = 0.99;  // < 1 so "common" (df = n) is excluded
    opts.max_features = 0;
    opts.remove_stopwords = false;
    const Vocabulary vocab = build_vocabulary(corpus, opts);
    const BinaryTermMatrix m = vectorize(corpus, vocab);
    for (int j = 0; j < m.cols(); ++j) {
      CHECK(m.col_count(j) > 0);
      CHECK(m.col_count(j) < m.rows());
    }
  }
}

TEST_CASE("balance: downsamples majority to minority count, original order kept") {
  Corpus corpus;
  for (int i = 0; i < 10; ++i) {
    Document doc;
    doc.id = "d" + std::to_string(i);
    doc.title = "t";
    doc.label = i < 7 ? 0 : 1;  // 7 real, 3 fake
    corpus.docs.push_back(doc);
  }
  const Corpus balanced = balance(corpus, 42);
  size_t fake = 0, real = 0;
  for (const auto& doc : balanced.docs) (doc.label ? fake : real)++;
  CHECK(fake == 3);
  CHECK(real == 3);
  // order preserved: ids strictly increasing in original index
  for (size_t i = 1; i < balanced.docs.size(); ++i) {
    CHECK(balanced.docs[i - 1].id < balanced.docs[i].id);
  }
}

TEST_CASE("balance: same seed reproduces the same subset") {
  Corpus corpus;
  for (int i = 0; i < 40; ++i) {
    Document doc;
    doc.id = "d" + std::to_string(i);
    doc.title = "t";
    doc.label = i < 30 ? 0 : 1;
    corpus.docs.push_back(doc);
  }
  const Corpus a = balance(corpus, 9);
  const Corpus b = balance(corpus, 9);
  REQUIRE(a.docs.size() == b.docs.size());
  for (size_t i = 0; i < a.docs.size(); ++i) CHECK(a.docs[i].id == b.docs[i].id);
}

TEST_CASE("balance: already balanced corpus returned unchanged") {
  Corpus corpus = tiny_corpus({"one", "two", "three", "four"}, {0, 1, 0, 1});
  const Corpus out = balance(corpus, 1);
  REQUIRE(out.docs.size() == corpus.docs.size());
  for (size_t i = 0; i < out.docs.size(); ++i) CHECK(out.docs[i].id == corpus.docs[i].id);
}

TEST_CASE("balance: single-class corpus is an error") {
  Corpus corpus = tiny_corpus({"one", "two"}, {1, 1});
  CHECK_THROWS_AS(balance(corpus, 0), std::runtime_error);
}

TEST_CASE("write_jsonl round-trips through ingest_jsonl") {
  TempDir dir("roundtrip");
  Corpus corpus = tiny_corpus({"alpha beta", "gamma, delta!"}, {1, 0});
  corpus.docs[0].content = "body text";
  corpus.docs[0].source = "unit";
  corpus.docs[1].source = "unit";
  write_jsonl(corpus, dir.file("c.jsonl"));
  const Corpus back = ingest_jsonl(dir.file("c.jsonl"));
  REQUIRE(back.docs.size() == corpus.docs.size());
  for (size_t i = 0; i < corpus.docs.size(); ++i) {
    CHECK(back.docs[i].id == corpus.docs[i].id);
    CHECK(back.docs[i].title == corpus.docs[i].title);
    CHECK(back.docs[i].content == corpus.docs[i].content);
    CHECK(back.docs[i].label == corpus.docs[i].label);
    CHECK(back.docs[i].source == corpus.docs[i].source);
  }
}
