#include <cmath>

#include "doctest.h"
#include "psm/errors.hpp"
#include "psm/eval.hpp"
#include "psm/matrix.hpp"
#include "psm/synth.hpp"
#include "test_support.hpp"

using namespace psm;

TEST_CASE("generate: sizes, truth set, near-balanced labels") {
  SynthConfig cfg;
  cfg.seed = 3;
  const SynthOutput out = generate(cfg);
  CHECK(out.train.size() == 2000);
  CHECK(out.test.size() == 2000);
  CHECK(out.truth.size() == 40);

  for (const Corpus* corpus : {&out.train, &out.test}) {
    size_t fake = 0;
    for (const auto& doc : corpus->docs) fake += doc.label != 0;
    const double frac = static_cast<double>(fake) / static_cast<double>(corpus->size());
    CHECK(frac > 0.45);
    CHECK(frac < 0.55);
  }
}

TEST_CASE("generate: same config, byte-identical corpora") {
  SynthConfig cfg;
  cfg.n_docs = 250;
  cfg.seed = 77;
  test_support::TempDir dir("synth_det");
  write_synth_output(generate(cfg), dir.file("a"));
  write_synth_output(generate(cfg), dir.file("b"));
  for (const char* name : {"train.jsonl", "test.jsonl", "truth.txt"}) {
    CHECK(test_support::read_file(dir.file(std::string("a/") + name)) ==
          test_support::read_file(dir.file(std::string("b/") + name)));
  }
}

TEST_CASE("generate: tokens survive the tokenizer") {
  SynthConfig cfg;
  cfg.n_docs = 50;
  cfg.seed = 1;
  const SynthOutput out = generate(cfg);
  for (const auto& tok : out.truth) {
    const auto round = tokenize(tok);
    REQUIRE(round.size() == 1);
    CHECK(round[0] == tok);
  }
  // a document's title re-tokenizes to its word set
  const auto toks = tokenize(out.train.docs[0].title);
  for (const auto& t : toks) {
    CHECK(t.find_first_of("0123456789") == std::string::npos);
  }
}

TEST_CASE("generate: causal word frequency matches the plant within 3 SE") {
  SynthConfig cfg;
  cfg.seed = 13;
  const SynthOutput out = generate(cfg);
  std::vector<const Document*> fakes;
  for (const auto& doc : out.train.docs) {
    if (doc.label == 1) fakes.push_back(&doc);
  }
  const double n = static_cast<double>(fakes.size());
  const double se = std::sqrt(cfg.p_causal_hi * (1.0 - cfg.p_causal_hi) / n);
  for (int w = 0; w < 3; ++w) {  // spot-check a few causal-fake words
    const std::string& word = out.truth[static_cast<size_t>(w)];
    double present = 0.0;
    for (const Document* doc : fakes) {
      const auto toks = tokenize(doc->title);
      if (std::find(toks.begin(), toks.end(), word) != toks.end()) present += 1.0;
    }
    const double freq = present / n;
    CHECK(std::fabs(freq - cfg.p_causal_hi) < 3.0 * se);
  }
}

TEST_CASE("generate: rho 0.9 plants a label-correlated confounder") {
  SynthConfig cfg;
  cfg.n_docs = 1500;
  cfg.seed = 8;
  const SynthOutput out = generate(cfg);

  // point-biserial sign: confounder words must correlate with the label more
  // than noise words do in the train split
  auto label_corr = [&](const std::string& word) {
    double n = 0, mean_y = 0, mean_x = 0;
    std::vector<std::pair<double, double>> xy;
    for (const auto& doc : out.train.docs) {
      const auto toks = tokenize(doc.title);
      const double x =
          std::find(toks.begin(), toks.end(), word) != toks.end() ? 1.0 : 0.0;
      const double y = doc.label;
      xy.emplace_back(x, y);
      mean_x += x;
      mean_y += y;
      n += 1;
    }
    mean_x /= n;
    mean_y /= n;
    double cov = 0, vx = 0, vy = 0;
    for (auto [x, y] : xy) {
      cov += (x - mean_x) * (y - mean_y);
      vx += (x - mean_x) * (x - mean_x);
      vy += (y - mean_y) * (y - mean_y);
    }
    return cov / std::sqrt(vx * vy + 1e-12);
  };

  const double conf_corr = label_corr("confaaa");
  const double noise_corr = label_corr("noiseaaa");
  CHECK(conf_corr > 0.15);
  CHECK(conf_corr > noise_corr);
}

TEST_CASE("generate: rho 0.5 decouples confounders; psm ranks causal words above them") {
  // With no confounder-label association, literal-mode chi-square
  // concentrates causal words above confounder words.
  int causal_wins = 0;
  for (uint64_t seed = 0; seed < 3; ++seed) {
    SynthConfig cfg;
    cfg.n_docs = 600;
    cfg.n_causal_fake = 5;
    cfg.n_causal_real = 5;
    cfg.n_confounder = 5;
    cfg.n_noise = 30;
    cfg.rho_train = 0.5;
    cfg.seed = seed;
    const SynthOutput out = generate(cfg);

    RunConfig rc;
    rc.vocab.min_df = 2;
    rc.vocab.max_features = 0;
    rc.train.max_epochs = 80;
    rc.seed = seed;
    const PipelineArtifacts art = prepare_corpus(out.train, rc, seed);
    const FeatureRanking ranking = compute_ranking(art, RankMethod::Psm, rc);

    auto median_rank = [&](const std::string& prefix) {
      std::vector<double> ranks;
      for (size_t i = 0; i < ranking.entries.size(); ++i) {
        if (ranking.entries[i].token.rfind(prefix, 0) == 0)
          ranks.push_back(static_cast<double>(i));
      }
      std::sort(ranks.begin(), ranks.end());
      return ranks[ranks.size() / 2];
    };
    if (median_rank("cfake") < median_rank("conf") &&
        median_rank("creal") < median_rank("conf")) {
      ++causal_wins;
    }
  }
  CHECK(causal_wins >= 2);
}

TEST_CASE("synth config: invariant violations rejected") {
  SynthConfig cfg;
  cfg.p_causal_hi = 0.05;
  cfg.p_causal_lo = 0.30;  // hi must exceed lo
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  SynthConfig cfg2;
  cfg2.rho_train = 1.5;
  CHECK_THROWS_AS(cfg2.validate(), ConfigError);
  SynthConfig cfg3;
  cfg3.n_docs = 0;
  CHECK_THROWS_AS(cfg3.validate(), ConfigError);
}

TEST_CASE("synth config: json round trip and unknown keys") {
  SynthConfig cfg;
  cfg.n_docs = 123;
  cfg.rho_test = 0.25;
  const SynthConfig back = SynthConfig::from_json_string(cfg.to_json_string());
  CHECK(back.n_docs == 123);
  CHECK(back.rho_test == 0.25);
  CHECK_THROWS_AS(SynthConfig::from_json_string(R"({"bogus": 1})"), ConfigError);
}
