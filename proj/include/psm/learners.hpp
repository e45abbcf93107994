#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "psm/matrix.hpp"

namespace psm {

enum class ModelKind { Logistic, Svm };
enum class Classifier { Logistic, Svm, Forest };

struct TrainConfig {
  double learning_rate = 0.1;
  int max_epochs = 200;
  double l2_lambda = 1.0;  // on the mean-loss scale; the bias is never regularized
  double tolerance = 1e-4;  // convergence threshold on the gradient infinity-norm
  uint64_t seed = 0;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  ModelKind kind = ModelKind::Logistic;
};

// Minimizes mean log-loss + (l2_lambda/2)*||weights||^2 by full-batch
// gradient descent. Stops at max_epochs or when the gradient infinity-norm
// drops below cfg.tolerance.
LinearModel train_logreg(const BinaryTermMatrix& X, std::span<const int> y,
                         const TrainConfig& cfg);

// Mean hinge loss + (l2_lambda/2)*||weights||^2 via subgradient descent with
// step learning_rate/sqrt(epoch). Labels are mapped internally to {-1,+1}.
LinearModel train_linear_svm(const BinaryTermMatrix& X, std::span<const int> y,
                             const TrainConfig& cfg);

// Same trainers with one column held out of the model (its weight is pinned
// to zero), used by the propensity estimators where the target column must
// not predict itself. excluded_col = -1 trains on all columns.
LinearModel train_logreg_excluding(const BinaryTermMatrix& X, std::span<const int> y,
                                   const TrainConfig& cfg, int excluded_col);
LinearModel train_linear_svm_excluding(const BinaryTermMatrix& X, std::span<const int> y,
                                       const TrainConfig& cfg, int excluded_col);

// sigma(weights*x + bias), clamped into the open interval (0, 1).
double predict_proba(const LinearModel& model, std::span<const int> dense_row);
double decision_score(const LinearModel& model, std::span<const int> dense_row);

std::vector<double> predict_proba_all(const LinearModel& model, const BinaryTermMatrix& X);
std::vector<double> decision_scores_all(const LinearModel& model, const BinaryTermMatrix& X);

// Objective/gradient of the logistic problem at an arbitrary point, exposed
// so tests can run finite-difference checks against the analytic form.
// gradient has weights first, bias last (size cols+1).
double logreg_objective(const BinaryTermMatrix& X, std::span<const int> y,
                        std::span<const double> weights, double bias, double l2_lambda);
std::vector<double> logreg_gradient(const BinaryTermMatrix& X, std::span<const int> y,
                                    std::span<const double> weights, double bias,
                                    double l2_lambda);
double svm_objective(const BinaryTermMatrix& X, std::span<const int> y,
                     std::span<const double> weights, double bias, double l2_lambda);
std::vector<double> svm_subgradient(const BinaryTermMatrix& X, std::span<const int> y,
                                    std::span<const double> weights, double bias,
                                    double l2_lambda);

double sigmoid(double z);

// ---- random forest ----

struct ForestParams {
  int tree_count = 100;
  int max_depth = 10;
  int features_per_split = 0;  // 0 = ceil(sqrt(feature count))
};

// Binary split on one feature: rows with the feature absent go left.
// feature == -1 marks a leaf; value then holds the mean target.
struct TreeNode {
  int feature = -1;
  double value = 0.0;
  int left = -1;
  int right = -1;
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
};

struct Forest {
  std::vector<Tree> trees;
  ForestParams params;
  uint64_t seed = 0;
  int n_features = 0;
};

// Bagged trees on seeded bootstrap samples. Splits maximize impurity
// decrease over a seeded random subset of candidate features; growth stops
// at max_depth, node size < 2, or zero impurity. Leaves store the mean
// target, so a binary 0/1 target yields the positive-class fraction.
Forest train_forest(const BinaryTermMatrix& X, std::span<const double> target,
                    const ForestParams& params, uint64_t seed);
Forest train_forest_excluding(const BinaryTermMatrix& X, std::span<const double> target,
                              const ForestParams& params, uint64_t seed, int excluded_col);

// Mean of the leaf values reached across all trees; in [0, 1] for 0/1 targets.
double forest_proba(const Forest& forest, std::span<const int> dense_row);
std::vector<double> forest_proba_all(const Forest& forest, const BinaryTermMatrix& X);

const char* classifier_name(Classifier c);
Classifier classifier_from_name(const std::string& name);

}  // namespace psm
