#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "psm/config.hpp"
#include "psm/corpus.hpp"
#include "psm/learners.hpp"
#include "psm/matrix.hpp"
#include "psm/ranking.hpp"

namespace psm {

// Probability that a uniformly random positive outranks a uniformly random
// negative, ties counted 1/2 (Mann-Whitney). Requires both classes.
double auroc(std::span<const double> scores, std::span<const int> labels);

double accuracy(std::span<const int> predictions, std::span<const int> labels);

// |top-k of ranking intersected with truth| / k.
double precision_at_k(const FeatureRanking& ranking, const std::set<int>& truth, int k);

struct EvalResult {
  double auroc = 0.0;
  double accuracy = 0.0;
};

// Trains on the training matrix restricted to `features` and scores the test
// corpus vectorized with the TRAINING vocabulary restricted to the same
// features (unseen tokens are dropped; the test corpus contributes no
// statistics). Scores are probabilities for logistic/forest and raw margins
// for svm; the accuracy threshold is 0.5 probability / 0 margin.
EvalResult cross_eval(const BinaryTermMatrix& train_matrix, const Vocabulary& train_vocab,
                      const Corpus& test_corpus, const std::vector<int>& features,
                      Classifier classifier, const RunConfig& rc);

struct SweepPoint {
  RankMethod method = RankMethod::Df;
  double percent = 0.0;
  Classifier classifier = Classifier::Logistic;
  double auroc = 0.0;
  double accuracy = 0.0;
};

struct SweepReport {
  std::vector<SweepPoint> points;
  std::map<std::string, double> summary;  // method name -> normalized AUC of (percent, auroc)
  std::string train_source;
  std::string test_source;
  std::string fingerprint;
  uint64_t seed = 0;
};

// Balanced corpus + vocabulary + matrix, the shared inputs of ranking and
// evaluation.
struct PipelineArtifacts {
  Corpus corpus;
  Vocabulary vocab;
  BinaryTermMatrix matrix;
};

PipelineArtifacts prepare_corpus(const Corpus& corpus, const RunConfig& rc,
                                 uint64_t balance_seed);

// Ranking for one method over prepared artifacts. cache_dir, when non-empty,
// stores propensity tables keyed by a content hash so sweeps reuse scores.
FeatureRanking compute_ranking(const PipelineArtifacts& art, RankMethod method,
                               const RunConfig& rc, const std::string& cache_dir = "");

// Full cross-dataset feature-percentage sweep: for each method, rank on the
// prepared training corpus, then cross_eval at every grid point. The summary
// is the trapezoidal area under (percent/100, auroc) normalized by the span.
SweepReport sweep(const Corpus& train_corpus, const Corpus& test_corpus,
                  const std::vector<RankMethod>& methods, const std::vector<double>& grid,
                  Classifier classifier, const RunConfig& rc,
                  const std::string& cache_dir = "");

void write_sweep_csv(const SweepReport& report, const std::string& path);
void write_sweep_json(const SweepReport& report, const std::string& path);
SweepReport read_sweep_json(const std::string& path);

}  // namespace psm
