#include "psm/propensity.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

#include "psm/log.hpp"
#include "psm/parallel.hpp"
#include "psm/rng.hpp"
#include "psm/util.hpp"

namespace psm {

namespace {

std::vector<int> column_target(const BinaryTermMatrix& matrix, int feature) {
  std::vector<int> y(static_cast<size_t>(matrix.rows()), 0);
  for (int i : matrix.col(feature)) y[static_cast<size_t>(i)] = 1;
  return y;
}

}  // namespace

std::vector<double> estimate_feature(const BinaryTermMatrix& matrix, int feature,
                                     const PropensityOptions& opts) {
  if (feature < 0 || feature >= matrix.cols())
    throw std::runtime_error("estimate_feature: feature id out of range");
  const auto y = column_target(matrix, feature);
  try {
    if (opts.estimator == Estimator::Logistic) {
      const LinearModel model = train_logreg_excluding(matrix, y, opts.train, feature);
      return predict_proba_all(model, matrix);
    }
    std::vector<double> target(y.begin(), y.end());
    const uint64_t seed =
        derive_seed(derive_seed(opts.train.seed, seed_stream::propensity),
                    static_cast<uint64_t>(feature));
    const Forest forest = train_forest_excluding(matrix, target, opts.forest, seed, feature);
    return forest_proba_all(forest, matrix);
  } catch (const std::exception& e) {
    throw std::runtime_error("feature " + std::to_string(feature) + ": " + e.what());
  }
}

PropensityTable estimate_all(const BinaryTermMatrix& matrix, const PropensityOptions& opts,
                             int workers) {
  PropensityTable table;
  table.n_docs = matrix.rows();
  table.n_features = matrix.cols();
  table.estimator = opts.estimator;
  table.scores.assign(static_cast<size_t>(matrix.rows()) * static_cast<size_t>(matrix.cols()), 0.0);

  std::vector<std::string> skip_reason(static_cast<size_t>(matrix.cols()));
  parallel_for(matrix.cols(), workers, [&](int j) {
    const int present = matrix.col_count(j);
    if (present == 0 || present == matrix.rows()) {
      skip_reason[static_cast<size_t>(j)] = "constant column";
      return;
    }
    std::vector<double> scores;
    try {
      scores = estimate_feature(matrix, j, opts);
    } catch (const std::exception& e) {
      skip_reason[static_cast<size_t>(j)] = e.what();
      return;
    }
    std::memcpy(table.scores.data() + static_cast<size_t>(j) * static_cast<size_t>(matrix.rows()),
                scores.data(), scores.size() * sizeof(double));
  });

  for (int j = 0; j < matrix.cols(); ++j) {
    if (!skip_reason[static_cast<size_t>(j)].empty()) {
      table.skipped.emplace(j, skip_reason[static_cast<size_t>(j)]);
    }
  }
  if (!table.skipped.empty()) {
    logging::warn("propensity: skipped " + std::to_string(table.skipped.size()) + " of " +
                  std::to_string(matrix.cols()) + " features");
  }
  if (static_cast<int>(table.skipped.size()) == matrix.cols()) {
    throw std::runtime_error("estimate_all: every feature was skipped");
  }
  return table;
}

uint64_t propensity_content_hash(const BinaryTermMatrix& matrix, const PropensityOptions& opts) {
  uint64_t h = fnv1a64("psm-propensity-v1");
  h = matrix.content_hash(h);
  const int est = opts.estimator == Estimator::Logistic ? 0 : 1;
  h = fnv1a64_raw(&est, sizeof(est), h);
  h = fnv1a64_raw(&opts.train.learning_rate, sizeof(double), h);
  h = fnv1a64_raw(&opts.train.max_epochs, sizeof(int), h);
  h = fnv1a64_raw(&opts.train.l2_lambda, sizeof(double), h);
  h = fnv1a64_raw(&opts.train.tolerance, sizeof(double), h);
  if (opts.estimator == Estimator::Forest) {
    h = fnv1a64_raw(&opts.train.seed, sizeof(uint64_t), h);
    h = fnv1a64_raw(&opts.forest.tree_count, sizeof(int), h);
    h = fnv1a64_raw(&opts.forest.max_depth, sizeof(int), h);
    h = fnv1a64_raw(&opts.forest.features_per_split, sizeof(int), h);
  }
  return h;
}

namespace {
constexpr char kCacheMagic[8] = {'P', 'S', 'M', 'P', 'R', 'O', 'P', '1'};
}

void save_propensity(const PropensityTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(kCacheMagic, sizeof(kCacheMagic));
  const int32_t est = table.estimator == Estimator::Logistic ? 0 : 1;
  const int64_t docs = table.n_docs, feats = table.n_features;
  const int64_t n_skipped = static_cast<int64_t>(table.skipped.size());
  out.write(reinterpret_cast<const char*>(&est), sizeof(est));
  out.write(reinterpret_cast<const char*>(&docs), sizeof(docs));
  out.write(reinterpret_cast<const char*>(&feats), sizeof(feats));
  out.write(reinterpret_cast<const char*>(&n_skipped), sizeof(n_skipped));
  for (const auto& [id, reason] : table.skipped) {
    const int32_t fid = id;
    const int64_t len = static_cast<int64_t>(reason.size());
    out.write(reinterpret_cast<const char*>(&fid), sizeof(fid));
    out.write(reinterpret_cast<const char*>(&len), sizeof(len));
    out.write(reason.data(), static_cast<std::streamsize>(reason.size()));
  }
  out.write(reinterpret_cast<const char*>(table.scores.data()),
            static_cast<std::streamsize>(table.scores.size() * sizeof(double)));
  if (!out) throw std::runtime_error("write failed: " + path);
}

PropensityTable load_propensity(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kCacheMagic, sizeof(magic)) != 0)
    throw std::runtime_error("not a propensity cache file: " + path);
  int32_t est = 0;
  int64_t docs = 0, feats = 0, n_skipped = 0;
  in.read(reinterpret_cast<char*>(&est), sizeof(est));
  in.read(reinterpret_cast<char*>(&docs), sizeof(docs));
  in.read(reinterpret_cast<char*>(&feats), sizeof(feats));
  in.read(reinterpret_cast<char*>(&n_skipped), sizeof(n_skipped));
  if (!in || docs < 0 || feats < 0 || n_skipped < 0)
    throw std::runtime_error("corrupt propensity cache: " + path);
  PropensityTable table;
  table.estimator = est == 0 ? Estimator::Logistic : Estimator::Forest;
  table.n_docs = static_cast<int>(docs);
  table.n_features = static_cast<int>(feats);
  for (int64_t k = 0; k < n_skipped; ++k) {
    int32_t fid = 0;
    int64_t len = 0;
    in.read(reinterpret_cast<char*>(&fid), sizeof(fid));
    in.read(reinterpret_cast<char*>(&len), sizeof(len));
    if (!in || len < 0) throw std::runtime_error("corrupt propensity cache: " + path);
    std::string reason(static_cast<size_t>(len), '\0');
    in.read(reason.data(), len);
    table.skipped.emplace(fid, std::move(reason));
  }
  table.scores.resize(static_cast<size_t>(docs) * static_cast<size_t>(feats));
  in.read(reinterpret_cast<char*>(table.scores.data()),
          static_cast<std::streamsize>(table.scores.size() * sizeof(double)));
  if (!in) throw std::runtime_error("corrupt propensity cache: " + path);
  return table;
}

const char* estimator_name(Estimator e) {
  return e == Estimator::Logistic ? "logreg" : "forest";
}

Estimator estimator_from_name(const std::string& name) {
  if (name == "logreg" || name == "logistic") return Estimator::Logistic;
  if (name == "forest") return Estimator::Forest;
  throw std::runtime_error("unknown estimator: " + name);
}

}  // namespace psm
