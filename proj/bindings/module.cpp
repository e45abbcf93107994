#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "psm/config.hpp"
#include "psm/corpus.hpp"
#include "psm/eval.hpp"
#include "psm/learners.hpp"
#include "psm/matching.hpp"
#include "psm/matrix.hpp"
#include "psm/propensity.hpp"
#include "psm/ranking.hpp"
#include "psm/serialize.hpp"
#include "psm/synth.hpp"

namespace py = pybind11;
using namespace psm;

namespace {

std::vector<std::vector<int>> matrix_to_dense(const BinaryTermMatrix& m) {
  std::vector<std::vector<int>> out;
  out.reserve(static_cast<size_t>(m.rows()));
  for (int i = 0; i < m.rows(); ++i) out.push_back(m.dense_row(i));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Propensity-score-matched feature selection for text classification";

  // ---- corpus ----
  py::class_<Document>(m, "Document")
      .def(py::init<>())
      .def(py::init([](std::string id, std::string title, std::string content, int label,
                       std::string source) {
             return Document{std::move(id), std::move(title), std::move(content), label,
                             std::move(source)};
           }),
           py::arg("id"), py::arg("title"), py::arg("content") = "", py::arg("label") = 0,
           py::arg("source") = "")
      .def_readwrite("id", &Document::id)
      .def_readwrite("title", &Document::title)
      .def_readwrite("content", &Document::content)
      .def_readwrite("label", &Document::label)
      .def_readwrite("source", &Document::source);

  py::class_<Corpus>(m, "Corpus")
      .def(py::init<>())
      .def_readwrite("docs", &Corpus::docs)
      .def_readwrite("source", &Corpus::source)
      .def("__len__", [](const Corpus& c) { return c.docs.size(); });

  py::class_<Vocabulary>(m, "Vocabulary")
      .def_readonly("terms", &Vocabulary::terms)
      .def_readonly("doc_freq", &Vocabulary::doc_freq)
      .def("lookup", &Vocabulary::lookup)
      .def("__len__", &Vocabulary::size);

  py::class_<VocabOptions>(m, "VocabOptions")
      .def(py::init<>())
      .def_readwrite("min_df", &VocabOptions::min_df)
      .def_readwrite("max_df_ratio", &VocabOptions::max_df_ratio)
      .def_readwrite("max_features", &VocabOptions::max_features)
      .def_readwrite("remove_stopwords", &VocabOptions::remove_stopwords);

  py::class_<BinaryTermMatrix>(m, "BinaryTermMatrix")
      .def_static("from_rows", &BinaryTermMatrix::from_rows, py::arg("n_cols"),
                  py::arg("row_cols"), py::arg("labels"))
      .def_property_readonly("rows", &BinaryTermMatrix::rows)
      .def_property_readonly("cols", &BinaryTermMatrix::cols)
      .def("labels", &BinaryTermMatrix::labels)
      .def("cell", &BinaryTermMatrix::cell)
      .def("to_dense", &matrix_to_dense)
      .def("select_columns", &BinaryTermMatrix::select_columns);

  m.def("tokenize", [](const std::string& text) { return tokenize(text); }, py::arg("text"));
  m.def("ingest_jsonl", &ingest_jsonl, py::arg("path"));
  m.def("ingest_fakenewsnet_csv", &ingest_fakenewsnet_csv, py::arg("path"), py::arg("label"),
        py::arg("source"));
  m.def("write_jsonl", &write_jsonl, py::arg("corpus"), py::arg("path"));
  m.def("build_vocabulary", &build_vocabulary, py::arg("corpus"), py::arg("options"));
  m.def("vectorize", &vectorize, py::arg("corpus"), py::arg("vocab"));
  m.def("balance", &balance, py::arg("corpus"), py::arg("seed"));

  // ---- learners ----
  py::enum_<ModelKind>(m, "ModelKind")
      .value("logistic", ModelKind::Logistic)
      .value("svm", ModelKind::Svm);
  py::enum_<Classifier>(m, "Classifier")
      .value("logreg", Classifier::Logistic)
      .value("svm", Classifier::Svm)
      .value("forest", Classifier::Forest);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init<>())
      .def_readwrite("learning_rate", &TrainConfig::learning_rate)
      .def_readwrite("max_epochs", &TrainConfig::max_epochs)
      .def_readwrite("l2_lambda", &TrainConfig::l2_lambda)
      .def_readwrite("tolerance", &TrainConfig::tolerance)
      .def_readwrite("seed", &TrainConfig::seed);

  py::class_<LinearModel>(m, "LinearModel")
      .def_readonly("weights", &LinearModel::weights)
      .def_readonly("bias", &LinearModel::bias)
      .def_readonly("kind", &LinearModel::kind);

  py::class_<ForestParams>(m, "ForestParams")
      .def(py::init<>())
      .def_readwrite("tree_count", &ForestParams::tree_count)
      .def_readwrite("max_depth", &ForestParams::max_depth)
      .def_readwrite("features_per_split", &ForestParams::features_per_split);

  py::class_<Forest>(m, "Forest")
      .def_readonly("params", &Forest::params)
      .def_readonly("seed", &Forest::seed)
      .def_readonly("n_features", &Forest::n_features)
      .def("__len__", [](const Forest& f) { return f.trees.size(); });

  m.def("train_logreg",
        [](const BinaryTermMatrix& X, const std::vector<int>& y, const TrainConfig& cfg) {
          return train_logreg(X, y, cfg);
        },
        py::arg("X"), py::arg("y"), py::arg("cfg") = TrainConfig{});
  m.def("train_linear_svm",
        [](const BinaryTermMatrix& X, const std::vector<int>& y, const TrainConfig& cfg) {
          return train_linear_svm(X, y, cfg);
        },
        py::arg("X"), py::arg("y"), py::arg("cfg") = TrainConfig{});
  m.def("predict_proba",
        [](const LinearModel& model, const std::vector<int>& x) { return predict_proba(model, x); },
        py::arg("model"), py::arg("x"));
  m.def("decision_score",
        [](const LinearModel& model, const std::vector<int>& x) {
          return decision_score(model, x);
        },
        py::arg("model"), py::arg("x"));
  m.def("predict_proba_all", &predict_proba_all, py::arg("model"), py::arg("X"));
  m.def("train_forest",
        [](const BinaryTermMatrix& X, const std::vector<double>& target, const ForestParams& params,
           uint64_t seed) { return train_forest(X, target, params, seed); },
        py::arg("X"), py::arg("target"), py::arg("params") = ForestParams{}, py::arg("seed") = 0);
  m.def("forest_proba",
        [](const Forest& f, const std::vector<int>& x) { return forest_proba(f, x); },
        py::arg("forest"), py::arg("x"));
  m.def("forest_proba_all", &forest_proba_all, py::arg("forest"), py::arg("X"));

  m.def("save_linear_model", &save_linear_model, py::arg("model"), py::arg("path"));
  m.def("load_linear_model", &load_linear_model, py::arg("path"));
  m.def("save_forest", &save_forest, py::arg("forest"), py::arg("path"));
  m.def("load_forest", &load_forest, py::arg("path"));

  // ---- propensity ----
  py::enum_<Estimator>(m, "Estimator")
      .value("logreg", Estimator::Logistic)
      .value("forest", Estimator::Forest);

  py::class_<PropensityOptions>(m, "PropensityOptions")
      .def(py::init<>())
      .def_readwrite("estimator", &PropensityOptions::estimator)
      .def_readwrite("train", &PropensityOptions::train)
      .def_readwrite("forest", &PropensityOptions::forest);

  py::class_<PropensityTable>(m, "PropensityTable")
      .def_readonly("n_docs", &PropensityTable::n_docs)
      .def_readonly("n_features", &PropensityTable::n_features)
      .def_readonly("estimator", &PropensityTable::estimator)
      .def_readonly("skipped", &PropensityTable::skipped)
      .def("col", [](const PropensityTable& t, int j) {
        const auto c = t.col(j);
        return std::vector<double>(c.begin(), c.end());
      })
      .def("is_skipped", &PropensityTable::is_skipped);

  m.def("estimate_feature", &estimate_feature, py::arg("matrix"), py::arg("feature"),
        py::arg("options") = PropensityOptions{});
  m.def("estimate_all", &estimate_all, py::arg("matrix"),
        py::arg("options") = PropensityOptions{}, py::arg("workers") = 0,
        py::call_guard<py::gil_scoped_release>());

  // ---- matching ----
  py::enum_<StatMode>(m, "StatMode")
      .value("literal", StatMode::Literal)
      .value("mcnemar", StatMode::McNemar);

  py::class_<MatchedPair>(m, "MatchedPair")
      .def_readonly("treatment", &MatchedPair::treatment)
      .def_readonly("control", &MatchedPair::control)
      .def_readonly("gap", &MatchedPair::gap);

  py::class_<MatchedPairs>(m, "MatchedPairs")
      .def_readonly("pairs", &MatchedPairs::pairs)
      .def_readonly("feature", &MatchedPairs::feature)
      .def_readonly("caliper", &MatchedPairs::caliper)
      .def_readonly("note", &MatchedPairs::note)
      .def("__len__", [](const MatchedPairs& p) { return p.pairs.size(); });

  py::class_<PairStatistic>(m, "PairStatistic")
      .def_readonly("tn", &PairStatistic::tn)
      .def_readonly("cp", &PairStatistic::cp)
      .def_readonly("chi_square", &PairStatistic::chi_square)
      .def_readonly("mode", &PairStatistic::mode);

  m.def("greedy_match",
        [](const std::vector<double>& scores, const std::vector<int>& mask, double caliper) {
          return greedy_match(scores, mask, caliper);
        },
        py::arg("scores"), py::arg("treatment_mask"),
        py::arg("caliper") = kUnboundedCaliper);
  m.def("pair_statistic",
        [](const MatchedPairs& pairs, const std::vector<int>& labels, StatMode mode) {
          return pair_statistic(pairs, labels, mode);
        },
        py::arg("pairs"), py::arg("labels"), py::arg("mode") = StatMode::Literal);

  // ---- ranking ----
  py::enum_<RankMethod>(m, "RankMethod")
      .value("psm", RankMethod::Psm)
      .value("df", RankMethod::Df);

  py::class_<RankEntry>(m, "RankEntry")
      .def_readonly("feature", &RankEntry::feature)
      .def_readonly("token", &RankEntry::token)
      .def_readonly("score", &RankEntry::score);

  py::class_<FeatureRanking>(m, "FeatureRanking")
      .def_readonly("entries", &FeatureRanking::entries)
      .def_readonly("method", &FeatureRanking::method)
      .def_readonly("fingerprint", &FeatureRanking::fingerprint)
      .def("__len__", [](const FeatureRanking& r) { return r.entries.size(); });

  m.def("rank_psm", &rank_psm, py::arg("matrix"), py::arg("vocab"), py::arg("table"),
        py::arg("mode") = StatMode::Literal, py::arg("caliper") = kUnboundedCaliper,
        py::arg("fingerprint") = "", py::arg("workers") = 1);
  m.def("rank_df", &rank_df, py::arg("matrix"), py::arg("vocab"), py::arg("fingerprint") = "");
  m.def("select_top", &select_top, py::arg("ranking"), py::arg("percent"));
  m.def("write_ranking_csv", &write_ranking_csv, py::arg("ranking"), py::arg("path"));
  m.def("read_ranking_csv", &read_ranking_csv, py::arg("path"));

  // ---- config / eval ----
  py::class_<RunConfig>(m, "RunConfig")
      .def(py::init<>())
      .def_readwrite("vocab", &RunConfig::vocab)
      .def_readwrite("train", &RunConfig::train)
      .def_readwrite("forest", &RunConfig::forest)
      .def_readwrite("estimator", &RunConfig::estimator)
      .def_readwrite("stat_mode", &RunConfig::stat_mode)
      .def_readwrite("caliper", &RunConfig::caliper)
      .def_readwrite("classifier", &RunConfig::classifier)
      .def_readwrite("grid", &RunConfig::grid)
      .def_readwrite("balance", &RunConfig::balance)
      .def_readwrite("seed", &RunConfig::seed)
      .def_readwrite("workers", &RunConfig::workers)
      .def("validate", &RunConfig::validate)
      .def("fingerprint", &RunConfig::fingerprint)
      .def("to_json", &RunConfig::to_json_string)
      .def_static("from_json", &RunConfig::from_json_string, py::arg("text"))
      .def_static("from_json_file", &RunConfig::from_json_file, py::arg("path"));

  py::class_<EvalResult>(m, "EvalResult")
      .def_readonly("auroc", &EvalResult::auroc)
      .def_readonly("accuracy", &EvalResult::accuracy);

  py::class_<SweepPoint>(m, "SweepPoint")
      .def_readonly("method", &SweepPoint::method)
      .def_readonly("percent", &SweepPoint::percent)
      .def_readonly("classifier", &SweepPoint::classifier)
      .def_readonly("auroc", &SweepPoint::auroc)
      .def_readonly("accuracy", &SweepPoint::accuracy);

  py::class_<SweepReport>(m, "SweepReport")
      .def_readonly("points", &SweepReport::points)
      .def_readonly("summary", &SweepReport::summary)
      .def_readonly("train_source", &SweepReport::train_source)
      .def_readonly("test_source", &SweepReport::test_source)
      .def_readonly("fingerprint", &SweepReport::fingerprint)
      .def_readonly("seed", &SweepReport::seed);

  py::class_<PipelineArtifacts>(m, "PipelineArtifacts")
      .def_readonly("corpus", &PipelineArtifacts::corpus)
      .def_readonly("vocab", &PipelineArtifacts::vocab)
      .def_readonly("matrix", &PipelineArtifacts::matrix);

  m.def("auroc",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
          return auroc(scores, labels);
        },
        py::arg("scores"), py::arg("labels"));
  m.def("accuracy",
        [](const std::vector<int>& predictions, const std::vector<int>& labels) {
          return accuracy(predictions, labels);
        },
        py::arg("predictions"), py::arg("labels"));
  m.def("precision_at_k",
        [](const FeatureRanking& ranking, const std::vector<int>& truth, int k) {
          return precision_at_k(ranking, std::set<int>(truth.begin(), truth.end()), k);
        },
        py::arg("ranking"), py::arg("truth"), py::arg("k"));
  m.def("cross_eval", &cross_eval, py::arg("train_matrix"), py::arg("train_vocab"),
        py::arg("test_corpus"), py::arg("features"), py::arg("classifier"), py::arg("config"));
  m.def("prepare_corpus", &prepare_corpus, py::arg("corpus"), py::arg("config"),
        py::arg("balance_seed"));
  m.def("compute_ranking", &compute_ranking, py::arg("artifacts"), py::arg("method"),
        py::arg("config"), py::arg("cache_dir") = "",
        py::call_guard<py::gil_scoped_release>());
  m.def("sweep", &sweep, py::arg("train_corpus"), py::arg("test_corpus"), py::arg("methods"),
        py::arg("grid"), py::arg("classifier"), py::arg("config"), py::arg("cache_dir") = "",
        py::call_guard<py::gil_scoped_release>());
  m.def("write_sweep_csv", &write_sweep_csv, py::arg("report"), py::arg("path"));
  m.def("write_sweep_json", &write_sweep_json, py::arg("report"), py::arg("path"));
  m.def("read_sweep_json", &read_sweep_json, py::arg("path"));

  // ---- synth ----
  py::class_<SynthConfig>(m, "SynthConfig")
      .def(py::init<>())
      .def_readwrite("n_docs", &SynthConfig::n_docs)
      .def_readwrite("n_causal_fake", &SynthConfig::n_causal_fake)
      .def_readwrite("n_causal_real", &SynthConfig::n_causal_real)
      .def_readwrite("n_confounder", &SynthConfig::n_confounder)
      .def_readwrite("n_noise", &SynthConfig::n_noise)
      .def_readwrite("p_causal_hi", &SynthConfig::p_causal_hi)
      .def_readwrite("p_causal_lo", &SynthConfig::p_causal_lo)
      .def_readwrite("p_conf_hi", &SynthConfig::p_conf_hi)
      .def_readwrite("p_conf_lo", &SynthConfig::p_conf_lo)
      .def_readwrite("rho_train", &SynthConfig::rho_train)
      .def_readwrite("rho_test", &SynthConfig::rho_test)
      .def_readwrite("p_noise", &SynthConfig::p_noise)
      .def_readwrite("seed", &SynthConfig::seed)
      .def("validate", &SynthConfig::validate);

  py::class_<SynthOutput>(m, "SynthOutput")
      .def_readonly("train", &SynthOutput::train)
      .def_readonly("test", &SynthOutput::test)
      .def_readonly("truth", &SynthOutput::truth);

  m.def("generate", &generate, py::arg("config"));
  m.def("write_synth_output", &write_synth_output, py::arg("output"), py::arg("dir"));
}
