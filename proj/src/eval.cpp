#include "psm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "psm/csv.hpp"
#include "psm/errors.hpp"
#include "psm/log.hpp"
#include "psm/rng.hpp"
#include "psm/util.hpp"

namespace psm {

double auroc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size())
    throw std::runtime_error("auroc: scores and labels size mismatch");
  size_t n_pos = 0, n_neg = 0;
  for (int l : labels) (l ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0)
    throw std::runtime_error("auroc: both classes must be present");

  std::vector<size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return scores[a] < scores[b]; });

  // Midranks over tied score groups; rank sum of positives gives U.
  double pos_rank_sum = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);  // average of ranks i+1..j
    for (size_t k = i; k < j; ++k) {
      if (labels[order[k]]) pos_rank_sum += midrank;
    }
    i = j;
  }
  const double u = pos_rank_sum -
                   static_cast<double>(n_pos) * (static_cast<double>(n_pos) + 1.0) / 2.0;
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double accuracy(std::span<const int> predictions, std::span<const int> labels) {
  if (predictions.size() != labels.size())
    throw std::runtime_error("accuracy: predictions and labels size mismatch");
  if (labels.empty()) throw std::runtime_error("accuracy: empty input");
  size_t hits = 0;
  for (size_t i = 0; i < labels.size(); ++i) {
    if ((predictions[i] != 0) == (labels[i] != 0)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(labels.size());
}

double precision_at_k(const FeatureRanking& ranking, const std::set<int>& truth, int k) {
  if (k < 1 || static_cast<size_t>(k) > ranking.entries.size())
    throw std::runtime_error("precision_at_k: k out of range");
  int hits = 0;
  for (int i = 0; i < k; ++i) {
    if (truth.count(ranking.entries[static_cast<size_t>(i)].feature)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(k);
}

namespace {

BinaryTermMatrix vectorize_with_features(const Corpus& corpus, const Vocabulary& vocab,
                                         const std::vector<int>& sorted_features) {
  std::unordered_map<std::string, int> sub_index;
  for (size_t k = 0; k < sorted_features.size(); ++k) {
    sub_index.emplace(vocab.terms[static_cast<size_t>(sorted_features[k])],
                      static_cast<int>(k));
  }
  std::vector<std::vector<int>> rows(corpus.docs.size());
  std::vector<int> labels(corpus.docs.size());
  for (size_t i = 0; i < corpus.docs.size(); ++i) {
    labels[i] = corpus.docs[i].label;
    for (const auto& tok : tokenize(document_text(corpus.docs[i]))) {
      auto it = sub_index.find(tok);
      if (it != sub_index.end()) rows[i].push_back(it->second);
    }
  }
  return BinaryTermMatrix::from_rows(static_cast<int>(sorted_features.size()), std::move(rows),
                                     std::move(labels));
}

}  // namespace

EvalResult cross_eval(const BinaryTermMatrix& train_matrix, const Vocabulary& train_vocab,
                      const Corpus& test_corpus, const std::vector<int>& features,
                      Classifier classifier, const RunConfig& rc) {
  if (features.empty()) throw std::runtime_error("cross_eval: feature set is empty");
  if (train_vocab.size() != train_matrix.cols())
    throw std::runtime_error("cross_eval: vocabulary does not match training matrix");

  std::vector<int> sorted_features = features;
  std::sort(sorted_features.begin(), sorted_features.end());
  sorted_features.erase(std::unique(sorted_features.begin(), sorted_features.end()),
                        sorted_features.end());

  const BinaryTermMatrix sub_train = train_matrix.select_columns(sorted_features);
  const BinaryTermMatrix sub_test =
      vectorize_with_features(test_corpus, train_vocab, sorted_features);

  const auto& y = sub_train.labels();
  std::vector<double> scores;
  std::vector<int> predictions(static_cast<size_t>(sub_test.rows()));

  switch (classifier) {
    case Classifier::Logistic: {
      const LinearModel model = train_logreg(sub_train, y, rc.train);
      scores = predict_proba_all(model, sub_test);
      for (size_t i = 0; i < scores.size(); ++i) predictions[i] = scores[i] >= 0.5 ? 1 : 0;
      break;
    }
    case Classifier::Svm: {
      const LinearModel model = train_linear_svm(sub_train, y, rc.train);
      scores = decision_scores_all(model, sub_test);
      for (size_t i = 0; i < scores.size(); ++i) predictions[i] = scores[i] >= 0.0 ? 1 : 0;
      break;
    }
    case Classifier::Forest: {
      std::vector<double> target(y.begin(), y.end());
      const Forest model = train_forest(sub_train, target, rc.forest,
                                        derive_seed(rc.seed, seed_stream::classifier_forest));
      scores = forest_proba_all(model, sub_test);
      for (size_t i = 0; i < scores.size(); ++i) predictions[i] = scores[i] >= 0.5 ? 1 : 0;
      break;
    }
  }

  EvalResult result;
  result.auroc = auroc(scores, sub_test.labels());
  result.accuracy = accuracy(predictions, sub_test.labels());
  return result;
}

PipelineArtifacts prepare_corpus(const Corpus& corpus, const RunConfig& rc,
                                 uint64_t balance_seed) {
  PipelineArtifacts art;
  art.corpus = rc.balance ? balance(corpus, balance_seed) : corpus;
  art.vocab = build_vocabulary(art.corpus, rc.vocab);
  art.matrix = vectorize(art.corpus, art.vocab);
  return art;
}

FeatureRanking compute_ranking(const PipelineArtifacts& art, RankMethod method,
                               const RunConfig& rc, const std::string& cache_dir) {
  if (method == RankMethod::Df) {
    return rank_df(art.matrix, art.vocab, rc.fingerprint());
  }

  const PropensityOptions opts = rc.propensity_options();
  PropensityTable table;
  bool loaded = false;
  std::string cache_path;
  if (!cache_dir.empty()) {
    const uint64_t key = propensity_content_hash(art.matrix, opts);
    cache_path = (std::filesystem::path(cache_dir) / ("propensity_" + to_hex(key) + ".bin"))
                     .string();
    if (std::filesystem::exists(cache_path)) {
      table = load_propensity(cache_path);
      if (table.n_docs == art.matrix.rows() && table.n_features == art.matrix.cols()) {
        loaded = true;
        logging::info("propensity: loaded cached table from " + cache_path);
      }
    }
  }
  if (!loaded) {
    table = estimate_all(art.matrix, opts, rc.workers);
    if (!cache_path.empty()) {
      std::filesystem::create_directories(cache_dir);
      save_propensity(table, cache_path);
      logging::info("propensity: cached table at " + cache_path);
    }
  }
  return rank_psm(art.matrix, art.vocab, table, rc.stat_mode, rc.caliper, rc.fingerprint(),
                  rc.workers);
}

namespace {

double curve_summary(const std::vector<std::pair<double, double>>& pts) {
  if (pts.size() == 1) return pts.front().second;
  double area = 0.0;
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    area += (pts[k + 1].first - pts[k].first) * 0.5 * (pts[k].second + pts[k + 1].second);
  }
  const double span = pts.back().first - pts.front().first;
  return area / span;
}

}  // namespace

SweepReport sweep(const Corpus& train_corpus, const Corpus& test_corpus,
                  const std::vector<RankMethod>& methods, const std::vector<double>& grid,
                  Classifier classifier, const RunConfig& rc, const std::string& cache_dir) {
  if (methods.empty()) throw ConfigError("sweep: no methods requested");
  if (grid.empty()) throw ConfigError("sweep: grid must be non-empty");
  for (double p : grid) {
    if (!(p > 0.0 && p <= 100.0)) throw ConfigError("sweep: grid values must be in (0, 100]");
  }
  std::vector<double> sorted_grid = grid;
  std::sort(sorted_grid.begin(), sorted_grid.end());
  sorted_grid.erase(std::unique(sorted_grid.begin(), sorted_grid.end()), sorted_grid.end());

  const PipelineArtifacts train_art =
      prepare_corpus(train_corpus, rc, derive_seed(rc.seed, seed_stream::balance_train));
  const Corpus test_balanced =
      rc.balance ? balance(test_corpus, derive_seed(rc.seed, seed_stream::balance_test))
                 : test_corpus;

  SweepReport report;
  report.train_source = train_corpus.source;
  report.test_source = test_corpus.source;
  report.fingerprint = rc.fingerprint();
  report.seed = rc.seed;

  for (RankMethod method : methods) {
    const std::string name = rank_method_name(method);
    FeatureRanking ranking;
    try {
      ranking = compute_ranking(train_art, method, rc, cache_dir);
    } catch (const std::exception& e) {
      throw std::runtime_error("sweep: method " + name + ": " + e.what());
    }
    std::vector<std::pair<double, double>> curve;
    for (double percent : sorted_grid) {
      try {
        const auto features = select_top(ranking, percent);
        const EvalResult r =
            cross_eval(train_art.matrix, train_art.vocab, test_balanced, features, classifier, rc);
        report.points.push_back({method, percent, classifier, r.auroc, r.accuracy});
        curve.emplace_back(percent / 100.0, r.auroc);
      } catch (const std::exception& e) {
        throw std::runtime_error("sweep: method " + name + ", percent " +
                                 format_double(percent) + ": " + e.what());
      }
    }
    report.summary[name] = curve_summary(curve);
  }
  return report;
}

void write_sweep_csv(const SweepReport& report, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << "method,percent,classifier,auroc,accuracy\n";
  for (const auto& p : report.points) {
    out << rank_method_name(p.method) << "," << format_double(p.percent) << ","
        << classifier_name(p.classifier) << "," << format_double(p.auroc) << ","
        << format_double(p.accuracy) << "\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

void write_sweep_json(const SweepReport& report, const std::string& path) {
  nlohmann::ordered_json j;
  j["provenance"] = {{"train_source", report.train_source},
                     {"test_source", report.test_source},
                     {"config_fingerprint", report.fingerprint},
                     {"seed", report.seed}};
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  for (const auto& [name, value] : report.summary) summary[name] = value;
  j["summary"] = std::move(summary);
  nlohmann::ordered_json points = nlohmann::ordered_json::array();
  for (const auto& p : report.points) {
    points.push_back({{"method", rank_method_name(p.method)},
                      {"percent", p.percent},
                      {"classifier", classifier_name(p.classifier)},
                      {"auroc", p.auroc},
                      {"accuracy", p.accuracy}});
  }
  j["points"] = std::move(points);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

SweepReport read_sweep_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid json: " + e.what());
  }
  SweepReport report;
  const auto& prov = j.at("provenance");
  report.train_source = prov.at("train_source").get<std::string>();
  report.test_source = prov.at("test_source").get<std::string>();
  report.fingerprint = prov.at("config_fingerprint").get<std::string>();
  report.seed = prov.at("seed").get<uint64_t>();
  for (const auto& [name, value] : j.at("summary").items()) {
    report.summary[name] = value.get<double>();
  }
  for (const auto& p : j.at("points")) {
    SweepPoint pt;
    pt.method = rank_method_from_name(p.at("method").get<std::string>());
    pt.percent = p.at("percent").get<double>();
    pt.classifier = classifier_from_name(p.at("classifier").get<std::string>());
    pt.auroc = p.at("auroc").get<double>();
    pt.accuracy = p.at("accuracy").get<double>();
    report.points.push_back(pt);
  }
  return report;
}

}  // namespace psm
