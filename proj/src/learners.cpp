#include "psm/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "psm/rng.hpp"

namespace psm {

namespace {

constexpr double kProbFloor = 1e-15;

void check_training_input(const BinaryTermMatrix& X, std::span<const int> y) {
  if (static_cast<size_t>(X.rows()) != y.size())
    throw std::runtime_error("train: label count must equal row count");
  if (X.rows() < 2) throw std::runtime_error("train: need at least 2 rows");
  bool has_pos = false, has_neg = false;
  for (int v : y) (v ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::runtime_error("train: both classes must be present");
}

// z = bias + X * weights, accumulated column-major. Skipping zero weights
// does not change any sum.
void linear_scores(const BinaryTermMatrix& X, std::span<const double> w, double bias,
                   std::vector<double>& z) {
  z.assign(static_cast<size_t>(X.rows()), bias);
  for (int j = 0; j < X.cols(); ++j) {
    const double wj = w[static_cast<size_t>(j)];
    if (wj == 0.0) continue;
    for (int i : X.col(j)) z[static_cast<size_t>(i)] += wj;
  }
}

double softplus(double z) {
  return std::max(z, 0.0) + std::log1p(std::exp(-std::fabs(z)));
}

}  // namespace

double sigmoid(double z) {
  if (z >= 0.0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double logreg_objective(const BinaryTermMatrix& X, std::span<const int> y,
                        std::span<const double> weights, double bias, double l2_lambda) {
  std::vector<double> z;
  linear_scores(X, weights, bias, z);
  const double n = static_cast<double>(X.rows());
  double loss = 0.0;
  for (int i = 0; i < X.rows(); ++i) {
    loss += softplus(z[static_cast<size_t>(i)]) -
            static_cast<double>(y[static_cast<size_t>(i)]) * z[static_cast<size_t>(i)];
  }
  loss /= n;
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return loss + 0.5 * l2_lambda * reg;
}

std::vector<double> logreg_gradient(const BinaryTermMatrix& X, std::span<const int> y,
                                    std::span<const double> weights, double bias,
                                    double l2_lambda) {
  std::vector<double> z;
  linear_scores(X, weights, bias, z);
  const double n = static_cast<double>(X.rows());
  std::vector<double> residual(static_cast<size_t>(X.rows()));
  double gb = 0.0;
  for (int i = 0; i < X.rows(); ++i) {
    residual[static_cast<size_t>(i)] =
        (sigmoid(z[static_cast<size_t>(i)]) - static_cast<double>(y[static_cast<size_t>(i)])) / n;
    gb += residual[static_cast<size_t>(i)];
  }
  std::vector<double> grad(static_cast<size_t>(X.cols()) + 1, 0.0);
  for (int j = 0; j < X.cols(); ++j) {
    double g = 0.0;
    for (int i : X.col(j)) g += residual[static_cast<size_t>(i)];
    grad[static_cast<size_t>(j)] = g + l2_lambda * weights[static_cast<size_t>(j)];
  }
  grad.back() = gb;
  return grad;
}

double svm_objective(const BinaryTermMatrix& X, std::span<const int> y,
                     std::span<const double> weights, double bias, double l2_lambda) {
  std::vector<double> z;
  linear_scores(X, weights, bias, z);
  const double n = static_cast<double>(X.rows());
  double loss = 0.0;
  for (int i = 0; i < X.rows(); ++i) {
    const double ys = y[static_cast<size_t>(i)] ? 1.0 : -1.0;
    loss += std::max(0.0, 1.0 - ys * z[static_cast<size_t>(i)]);
  }
  loss /= n;
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return loss + 0.5 * l2_lambda * reg;
}

std::vector<double> svm_subgradient(const BinaryTermMatrix& X, std::span<const int> y,
                                    std::span<const double> weights, double bias,
                                    double l2_lambda) {
  std::vector<double> z;
  linear_scores(X, weights, bias, z);
  const double n = static_cast<double>(X.rows());
  std::vector<double> residual(static_cast<size_t>(X.rows()), 0.0);
  double gb = 0.0;
  for (int i = 0; i < X.rows(); ++i) {
    const double ys = y[static_cast<size_t>(i)] ? 1.0 : -1.0;
    if (ys * z[static_cast<size_t>(i)] < 1.0) {
      residual[static_cast<size_t>(i)] = -ys / n;
      gb += residual[static_cast<size_t>(i)];
    }
  }
  std::vector<double> grad(static_cast<size_t>(X.cols()) + 1, 0.0);
  for (int j = 0; j < X.cols(); ++j) {
    double g = 0.0;
    for (int i : X.col(j)) g += residual[static_cast<size_t>(i)];
    grad[static_cast<size_t>(j)] = g + l2_lambda * weights[static_cast<size_t>(j)];
  }
  grad.back() = gb;
  return grad;
}

namespace {

LinearModel fit_linear(const BinaryTermMatrix& X, std::span<const int> y,
                       const TrainConfig& cfg, ModelKind kind, int excluded_col) {
  check_training_input(X, y);
  if (cfg.learning_rate <= 0.0) throw std::runtime_error("train: learning_rate must be > 0");
  if (cfg.tolerance <= 0.0) throw std::runtime_error("train: tolerance must be > 0");
  if (cfg.l2_lambda < 0.0) throw std::runtime_error("train: l2_lambda must be >= 0");

  const int n = X.rows();
  const int V = X.cols();
  const double inv_n = 1.0 / static_cast<double>(n);
  std::vector<double> w(static_cast<size_t>(V), 0.0);
  double b = 0.0;

  std::vector<double> z;
  std::vector<double> residual(static_cast<size_t>(n));
  std::vector<double> grad(static_cast<size_t>(V), 0.0);

  std::vector<double> ys;
  if (kind == ModelKind::Svm) {
    ys.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) ys[static_cast<size_t>(i)] = y[static_cast<size_t>(i)] ? 1.0 : -1.0;
  }

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    linear_scores(X, w, b, z);

    double loss = 0.0;
    double gb = 0.0;
    if (kind == ModelKind::Logistic) {
      for (int i = 0; i < n; ++i) {
        const double zi = z[static_cast<size_t>(i)];
        const double yi = static_cast<double>(y[static_cast<size_t>(i)]);
        loss += softplus(zi) - yi * zi;
        residual[static_cast<size_t>(i)] = (sigmoid(zi) - yi) * inv_n;
        gb += residual[static_cast<size_t>(i)];
      }
    } else {
      for (int i = 0; i < n; ++i) {
        const double margin = ys[static_cast<size_t>(i)] * z[static_cast<size_t>(i)];
        loss += std::max(0.0, 1.0 - margin);
        if (margin < 1.0) {
          residual[static_cast<size_t>(i)] = -ys[static_cast<size_t>(i)] * inv_n;
          gb += residual[static_cast<size_t>(i)];
        } else {
          residual[static_cast<size_t>(i)] = 0.0;
        }
      }
    }
    loss *= inv_n;
    double reg = 0.0;
    for (double wj : w) reg += wj * wj;
    loss += 0.5 * cfg.l2_lambda * reg;
    if (!std::isfinite(loss)) {
      throw std::runtime_error("train: non-finite loss at epoch " + std::to_string(epoch));
    }

    double grad_inf = std::fabs(gb);
    for (int j = 0; j < V; ++j) {
      if (j == excluded_col) {
        grad[static_cast<size_t>(j)] = 0.0;
        continue;
      }
      double g = 0.0;
      for (int i : X.col(j)) g += residual[static_cast<size_t>(i)];
      g += cfg.l2_lambda * w[static_cast<size_t>(j)];
      grad[static_cast<size_t>(j)] = g;
      grad_inf = std::max(grad_inf, std::fabs(g));
    }
    if (grad_inf < cfg.tolerance) break;

    const double step = kind == ModelKind::Logistic
                            ? cfg.learning_rate
                            : cfg.learning_rate / std::sqrt(static_cast<double>(epoch));
    for (int j = 0; j < V; ++j) w[static_cast<size_t>(j)] -= step * grad[static_cast<size_t>(j)];
    b -= step * gb;
  }

  LinearModel model;
  model.weights = std::move(w);
  model.bias = b;
  model.kind = kind;
  return model;
}

}  // namespace

LinearModel train_logreg(const BinaryTermMatrix& X, std::span<const int> y,
                         const TrainConfig& cfg) {
  return fit_linear(X, y, cfg, ModelKind::Logistic, -1);
}

LinearModel train_linear_svm(const BinaryTermMatrix& X, std::span<const int> y,
                             const TrainConfig& cfg) {
  return fit_linear(X, y, cfg, ModelKind::Svm, -1);
}

LinearModel train_logreg_excluding(const BinaryTermMatrix& X, std::span<const int> y,
                                   const TrainConfig& cfg, int excluded_col) {
  return fit_linear(X, y, cfg, ModelKind::Logistic, excluded_col);
}

LinearModel train_linear_svm_excluding(const BinaryTermMatrix& X, std::span<const int> y,
                                       const TrainConfig& cfg, int excluded_col) {
  return fit_linear(X, y, cfg, ModelKind::Svm, excluded_col);
}

double decision_score(const LinearModel& model, std::span<const int> dense_row) {
  if (dense_row.size() != model.weights.size())
    throw std::runtime_error("predict: dimension mismatch");
  double z = model.bias;
  for (size_t j = 0; j < dense_row.size(); ++j) {
    if (dense_row[j]) z += model.weights[j];
  }
  return z;
}

double predict_proba(const LinearModel& model, std::span<const int> dense_row) {
  const double p = sigmoid(decision_score(model, dense_row));
  return std::clamp(p, kProbFloor, 1.0 - kProbFloor);
}

std::vector<double> decision_scores_all(const LinearModel& model, const BinaryTermMatrix& X) {
  if (X.cols() != static_cast<int>(model.weights.size()))
    throw std::runtime_error("predict: dimension mismatch");
  std::vector<double> z;
  linear_scores(X, model.weights, model.bias, z);
  return z;
}

std::vector<double> predict_proba_all(const LinearModel& model, const BinaryTermMatrix& X) {
  auto z = decision_scores_all(model, X);
  for (double& v : z) v = std::clamp(sigmoid(v), kProbFloor, 1.0 - kProbFloor);
  return z;
}

// ---- random forest ----

namespace {

struct TreeBuilder {
  const BinaryTermMatrix& X;
  std::span<const double> target;
  const ForestParams& params;
  int mtry;
  Rng& rng;
  std::vector<int>& feature_pool;  // permutation of the allowed features
  Tree tree;

  int build(std::vector<int>& rows, int depth) {
    const int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();

    double sum = 0.0;
    double lo = target[static_cast<size_t>(rows.front())];
    double hi = lo;
    for (int r : rows) {
      const double t = target[static_cast<size_t>(r)];
      sum += t;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
    const double mean = sum / static_cast<double>(rows.size());

    const bool pure = lo == hi;
    if (depth >= params.max_depth || rows.size() < 2 || pure) {
      tree.nodes[static_cast<size_t>(node_id)].value = mean;
      return node_id;
    }

    // Draw mtry candidate features from the pool (partial Fisher-Yates on a
    // persistent permutation; the drawn set is still uniform).
    const int pool_n = static_cast<int>(feature_pool.size());
    const int k = std::min(mtry, pool_n);
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(rng.below(static_cast<uint64_t>(pool_n - i)));
      std::swap(feature_pool[static_cast<size_t>(i)], feature_pool[static_cast<size_t>(j)]);
    }

    // Best split by total within-children sum-of-squares (equivalent to
    // maximizing the impurity decrease); ties go to the lower feature id.
    int best_feature = -1;
    double best_children_sse = 0.0;
    for (int c = 0; c < k; ++c) {
      const int f = feature_pool[static_cast<size_t>(c)];
      double sum1 = 0.0, sumsq1 = 0.0;
      int n1 = 0;
      for (int r : rows) {
        if (X.cell(r, f)) {
          const double t = target[static_cast<size_t>(r)];
          sum1 += t;
          sumsq1 += t * t;
          ++n1;
        }
      }
      const int n0 = static_cast<int>(rows.size()) - n1;
      if (n0 == 0 || n1 == 0) continue;
      double sum0 = 0.0, sumsq0 = 0.0;
      for (int r : rows) {
        const double t = target[static_cast<size_t>(r)];
        sum0 += t;
        sumsq0 += t * t;
      }
      sum0 -= sum1;
      sumsq0 -= sumsq1;
      const double sse0 = std::max(0.0, sumsq0 - sum0 * sum0 / static_cast<double>(n0));
      const double sse1 = std::max(0.0, sumsq1 - sum1 * sum1 / static_cast<double>(n1));
      const double children_sse = sse0 + sse1;
      if (best_feature < 0 || children_sse < best_children_sse ||
          (children_sse == best_children_sse && f < best_feature)) {
        best_feature = f;
        best_children_sse = children_sse;
      }
    }
    if (best_feature < 0) {
      tree.nodes[static_cast<size_t>(node_id)].value = mean;
      return node_id;
    }

    std::vector<int> left_rows, right_rows;
    for (int r : rows) (X.cell(r, best_feature) ? right_rows : left_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();

    const int left_id = build(left_rows, depth + 1);
    const int right_id = build(right_rows, depth + 1);
    TreeNode& node = tree.nodes[static_cast<size_t>(node_id)];
    node.feature = best_feature;
    node.left = left_id;
    node.right = right_id;
    return node_id;
  }
};

Forest fit_forest(const BinaryTermMatrix& X, std::span<const double> target,
                  const ForestParams& params, uint64_t seed, int excluded_col) {
  if (static_cast<size_t>(X.rows()) != target.size())
    throw std::runtime_error("train_forest: target length must equal row count");
  if (X.rows() < 2) throw std::runtime_error("train_forest: need at least 2 rows");
  if (params.tree_count < 1) throw std::runtime_error("train_forest: tree_count must be >= 1");
  if (params.max_depth < 0) throw std::runtime_error("train_forest: max_depth must be >= 0");

  std::vector<int> allowed;
  allowed.reserve(static_cast<size_t>(X.cols()));
  for (int j = 0; j < X.cols(); ++j) {
    if (j != excluded_col) allowed.push_back(j);
  }
  const int mtry = params.features_per_split > 0
                       ? params.features_per_split
                       : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(allowed.size()))));

  Forest forest;
  forest.params = params;
  forest.seed = seed;
  forest.n_features = X.cols();
  forest.trees.resize(static_cast<size_t>(params.tree_count));

  const int n = X.rows();
  for (int t = 0; t < params.tree_count; ++t) {
    Rng rng(derive_seed(seed, static_cast<uint64_t>(t)));
    std::vector<int> rows(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) rows[static_cast<size_t>(i)] = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
    std::vector<int> pool = allowed;
    TreeBuilder builder{X, target, params, mtry, rng, pool, {}};
    builder.build(rows, 0);
    forest.trees[static_cast<size_t>(t)] = std::move(builder.tree);
  }
  return forest;
}

double tree_value(const Tree& tree, std::span<const int> dense_row) {
  int node = 0;
  for (;;) {
    const TreeNode& nd = tree.nodes[static_cast<size_t>(node)];
    if (nd.feature < 0) return nd.value;
    node = dense_row[static_cast<size_t>(nd.feature)] ? nd.right : nd.left;
  }
}

double tree_value_sparse(const Tree& tree, std::span<const int> row_cols) {
  int node = 0;
  for (;;) {
    const TreeNode& nd = tree.nodes[static_cast<size_t>(node)];
    if (nd.feature < 0) return nd.value;
    const bool present = std::binary_search(row_cols.begin(), row_cols.end(), nd.feature);
    node = present ? nd.right : nd.left;
  }
}

}  // namespace

Forest train_forest(const BinaryTermMatrix& X, std::span<const double> target,
                    const ForestParams& params, uint64_t seed) {
  return fit_forest(X, target, params, seed, -1);
}

Forest train_forest_excluding(const BinaryTermMatrix& X, std::span<const double> target,
                              const ForestParams& params, uint64_t seed, int excluded_col) {
  return fit_forest(X, target, params, seed, excluded_col);
}

double forest_proba(const Forest& forest, std::span<const int> dense_row) {
  if (forest.trees.empty()) throw std::runtime_error("forest_proba: empty forest");
  if (dense_row.size() != static_cast<size_t>(forest.n_features))
    throw std::runtime_error("forest_proba: dimension mismatch");
  double sum = 0.0;
  for (const auto& tree : forest.trees) sum += tree_value(tree, dense_row);
  return sum / static_cast<double>(forest.trees.size());
}

std::vector<double> forest_proba_all(const Forest& forest, const BinaryTermMatrix& X) {
  if (forest.trees.empty()) throw std::runtime_error("forest_proba: empty forest");
  if (X.cols() != forest.n_features) throw std::runtime_error("forest_proba: dimension mismatch");
  std::vector<double> out(static_cast<size_t>(X.rows()));
  for (int i = 0; i < X.rows(); ++i) {
    double sum = 0.0;
    for (const auto& tree : forest.trees) sum += tree_value_sparse(tree, X.row(i));
    out[static_cast<size_t>(i)] = sum / static_cast<double>(forest.trees.size());
  }
  return out;
}

const char* classifier_name(Classifier c) {
  switch (c) {
    case Classifier::Logistic: return "logreg";
    case Classifier::Svm: return "svm";
    case Classifier::Forest: return "forest";
  }
  return "logreg";
}

Classifier classifier_from_name(const std::string& name) {
  if (name == "logreg" || name == "logistic") return Classifier::Logistic;
  if (name == "svm") return Classifier::Svm;
  if (name == "forest") return Classifier::Forest;
  throw std::runtime_error("unknown classifier: " + name);
}

}  // namespace psm
