#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "psm/learners.hpp"
#include "psm/matrix.hpp"

namespace psm {

enum class Estimator { Logistic, Forest };

struct PropensityOptions {
  Estimator estimator = Estimator::Logistic;
  TrainConfig train;
  ForestParams forest;
};

// Per-document estimated probability of containing each feature given the
// rest of the feature space. Column-major: one contiguous column per feature.
struct PropensityTable {
  int n_docs = 0;
  int n_features = 0;
  std::vector<double> scores;
  Estimator estimator = Estimator::Logistic;
  std::map<int, std::string> skipped;  // feature id -> reason

  std::span<const double> col(int j) const {
    return {scores.data() + static_cast<size_t>(j) * static_cast<size_t>(n_docs),
            static_cast<size_t>(n_docs)};
  }
  bool is_skipped(int j) const { return skipped.count(j) > 0; }
};

// Fits a model predicting column `feature` from every other column and
// returns its predicted probability for every document (documents that do
// contain the feature keep the model probability, not 1).
std::vector<double> estimate_feature(const BinaryTermMatrix& matrix, int feature,
                                     const PropensityOptions& opts);

// estimate_feature over every column, fanned out across `workers` threads
// (0 = machine parallelism). Output is a pure function of (matrix, opts):
// columns are assembled by feature id, so any worker count yields identical
// bytes. Degenerate or failing features are recorded in `skipped`; the call
// fails only if every feature skips.
PropensityTable estimate_all(const BinaryTermMatrix& matrix, const PropensityOptions& opts,
                             int workers = 0);

// Cache key covering everything the scores depend on.
uint64_t propensity_content_hash(const BinaryTermMatrix& matrix, const PropensityOptions& opts);

void save_propensity(const PropensityTable& table, const std::string& path);
PropensityTable load_propensity(const std::string& path);

const char* estimator_name(Estimator e);
Estimator estimator_from_name(const std::string& name);

}  // namespace psm
