#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "psm/config.hpp"
#include "psm/corpus.hpp"
#include "psm/errors.hpp"
#include "psm/eval.hpp"
#include "psm/log.hpp"
#include "psm/matching.hpp"
#include "psm/propensity.hpp"
#include "psm/ranking.hpp"
#include "psm/rng.hpp"
#include "psm/synth.hpp"
#include "psm/util.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  std::string config_path;
  uint64_t seed = 0;
  int workers = 0;
  CLI::Option* config_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* workers_opt = nullptr;

  void attach(CLI::App* cmd) {
    config_opt = cmd->add_option("--config", config_path, "Run configuration JSON file");
    seed_opt = cmd->add_option("--seed", seed, "Seed for all randomness in the run");
    workers_opt = cmd->add_option("--workers", workers,
                                  "Worker threads (0 = machine parallelism)");
  }

  // Flag beats file beats default.
  psm::RunConfig resolve() const {
    psm::RunConfig rc;
    if (config_opt && config_opt->count() > 0) rc = psm::RunConfig::from_json_file(config_path);
    if (seed_opt && seed_opt->count() > 0) rc.seed = seed;
    if (workers_opt && workers_opt->count() > 0) rc.workers = workers;
    return rc;
  }
};

void print_label_counts(const psm::Corpus& corpus) {
  size_t fake = 0, real = 0;
  for (const auto& doc : corpus.docs) (doc.label ? fake : real)++;
  std::cout << "documents: " << corpus.docs.size() << " (fake: " << fake << ", real: " << real
            << ")\n";
}

int run_ingest(const std::string& format, const std::string& input, const std::string& fake_csv,
               const std::string& real_csv, const std::string& source,
               const std::string& output) {
  psm::Corpus corpus;
  if (format == "jsonl") {
    if (input.empty()) throw psm::ConfigError("ingest: --input is required for jsonl");
    corpus = psm::ingest_jsonl(input);
    if (!source.empty()) {
      corpus.source = source;
      for (auto& doc : corpus.docs) doc.source = source;
    }
  } else if (format == "fakenewsnet-csv") {
    if (fake_csv.empty() && real_csv.empty())
      throw psm::ConfigError("ingest: fakenewsnet-csv needs --fake and/or --real");
    bool first = true;
    if (!fake_csv.empty()) {
      corpus = psm::ingest_fakenewsnet_csv(fake_csv, 1, source);
      first = false;
    }
    if (!real_csv.empty()) {
      psm::Corpus real = psm::ingest_fakenewsnet_csv(real_csv, 0, source);
      if (first) {
        corpus = std::move(real);
      } else {
        psm::append_corpus(corpus, real);
      }
    }
    corpus.source = source;
  } else {
    throw psm::ConfigError("ingest: unknown format '" + format + "'");
  }
  psm::write_jsonl(corpus, output);
  print_label_counts(corpus);
  std::cout << "wrote " << output << "\n";
  return kExitOk;
}

int run_rank(const psm::RunConfig& rc, const std::string& corpus_path,
             const std::string& method_name, const std::string& output,
             const std::string& pairs_csv, int top_n) {
  const psm::RankMethod method = psm::rank_method_from_name(method_name);
  const psm::Corpus corpus = psm::ingest_jsonl(corpus_path);
  const psm::PipelineArtifacts art = psm::prepare_corpus(
      corpus, rc, psm::derive_seed(rc.seed, psm::seed_stream::balance_train));
  psm::logging::info("rank: " + std::to_string(art.corpus.size()) + " documents, " +
                     std::to_string(art.vocab.size()) + " features");

  psm::FeatureRanking ranking;
  if (method == psm::RankMethod::Df) {
    ranking = psm::compute_ranking(art, method, rc);
  } else {
    const psm::PropensityTable table =
        psm::estimate_all(art.matrix, rc.propensity_options(), rc.workers);
    ranking = psm::rank_psm(art.matrix, art.vocab, table, rc.stat_mode, rc.caliper,
                            rc.fingerprint(), rc.workers);
    if (!pairs_csv.empty()) {
      psm::write_pairs_csv(art.matrix, art.vocab, table, art.corpus, rc.caliper, pairs_csv);
      std::cout << "wrote " << pairs_csv << "\n";
    }
  }
  psm::write_ranking_csv(ranking, output);

  std::cout << "top " << top_n << " features (" << psm::rank_method_name(method) << "):\n";
  for (int i = 0; i < top_n && i < static_cast<int>(ranking.entries.size()); ++i) {
    const auto& e = ranking.entries[static_cast<size_t>(i)];
    std::cout << "  " << (i + 1) << ". " << e.token << " (" << psm::format_double(e.score)
              << ")\n";
  }
  std::cout << "wrote " << output << "\n";
  return kExitOk;
}

int run_sweep(const psm::RunConfig& rc, const std::string& train_path,
              const std::string& test_path, const std::string& methods_arg,
              const std::string& out_csv, const std::string& out_json,
              const std::string& cache_dir) {
  std::vector<psm::RankMethod> methods;
  {
    std::stringstream ss(methods_arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) methods.push_back(psm::rank_method_from_name(item));
    }
  }
  if (methods.empty()) throw psm::ConfigError("sweep: --methods must name psm and/or df");

  const psm::Corpus train = psm::ingest_jsonl(train_path);
  const psm::Corpus test = psm::ingest_jsonl(test_path);
  const psm::SweepReport report =
      psm::sweep(train, test, methods, rc.grid, rc.classifier, rc, cache_dir);

  if (!out_csv.empty()) {
    psm::write_sweep_csv(report, out_csv);
    std::cout << "wrote " << out_csv << "\n";
  }
  if (!out_json.empty()) {
    psm::write_sweep_json(report, out_json);
    std::cout << "wrote " << out_json << "\n";
  }

  std::string winner;
  double best = -1.0;
  bool tie = false;
  for (const auto& [name, value] : report.summary) {
    std::cout << "summary " << name << ": " << psm::format_double(value) << "\n";
    if (value > best) {
      best = value;
      winner = name;
      tie = false;
    } else if (value == best) {
      tie = true;
    }
  }
  std::cout << "winner: " << (tie ? "tie" : winner) << "\n";
  return kExitOk;
}

int run_synth(const std::string& config_path, uint64_t seed, bool seed_given,
              const std::string& out_dir) {
  psm::SynthConfig cfg;
  if (!config_path.empty()) cfg = psm::SynthConfig::from_json_file(config_path);
  if (seed_given) cfg.seed = seed;
  cfg.validate();
  const psm::SynthOutput out = psm::generate(cfg);
  psm::write_synth_output(out, out_dir);
  std::cout << "train: " << out.train.size() << " documents\n";
  std::cout << "test: " << out.test.size() << " documents\n";
  std::cout << "truth: " << out.truth.size() << " causal tokens\n";
  std::cout << "wrote " << out_dir << "/{train.jsonl,test.jsonl,truth.txt}\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Propensity-score-matched feature selection for text classification"};
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Normalize a dataset into the jsonl corpus format");
  std::string ingest_format = "jsonl", ingest_input, ingest_fake, ingest_real, ingest_source,
              ingest_output;
  ingest->add_option("--format", ingest_format, "Input format: jsonl | fakenewsnet-csv");
  ingest->add_option("--input", ingest_input, "Input file (jsonl format)");
  ingest->add_option("--fake", ingest_fake, "FakeNewsNet CSV of fake items");
  ingest->add_option("--real", ingest_real, "FakeNewsNet CSV of real items");
  ingest->add_option("--source", ingest_source, "Source tag stamped on every document");
  ingest->add_option("--output", ingest_output, "Output jsonl path")->required();
  CommonFlags ingest_common;
  ingest_common.attach(ingest);

  // rank
  auto* rank = app.add_subcommand("rank", "Rank vocabulary features by psm or df");
  std::string rank_corpus, rank_method = "psm", rank_estimator, rank_stat, rank_output,
              rank_pairs_csv;
  double rank_caliper = 0.0;
  int rank_top = 10;
  rank->add_option("--corpus", rank_corpus, "Corpus jsonl path")->required();
  rank->add_option("--method", rank_method, "Ranking method: psm | df")
      ->check(CLI::IsMember({"psm", "df"}));
  auto* rank_estimator_opt =
      rank->add_option("--estimator", rank_estimator, "Propensity estimator: logreg | forest")
          ->check(CLI::IsMember({"logreg", "forest"}));
  auto* rank_stat_opt = rank->add_option("--stat", rank_stat, "Statistic mode: literal | mcnemar")
                            ->check(CLI::IsMember({"literal", "mcnemar"}));
  auto* rank_caliper_opt =
      rank->add_option("--caliper", rank_caliper, "Maximum propensity gap for a valid match");
  rank->add_option("--output", rank_output, "Ranking CSV output path")->required();
  rank->add_option("--pairs-csv", rank_pairs_csv, "Matched-pairs audit CSV (psm only)");
  rank->add_option("--top", rank_top, "How many top tokens to print")->check(CLI::PositiveNumber);
  CommonFlags rank_common;
  rank_common.attach(rank);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Cross-dataset feature-percentage sweep");
  std::string sweep_train, sweep_test, sweep_methods = "psm,df", sweep_classifier, sweep_grid,
              sweep_out_csv, sweep_out_json, sweep_cache_dir, sweep_estimator, sweep_stat;
  sweep->add_option("--train", sweep_train, "Training corpus jsonl")->required();
  sweep->add_option("--test", sweep_test, "Test corpus jsonl")->required();
  sweep->add_option("--methods", sweep_methods, "Comma list of methods (psm,df)");
  auto* sweep_classifier_opt =
      sweep->add_option("--classifier", sweep_classifier, "Classifier: logreg | svm | forest")
          ->check(CLI::IsMember({"logreg", "svm", "forest"}));
  auto* sweep_grid_opt =
      sweep->add_option("--grid", sweep_grid, "Comma list of feature percentages in (0,100]");
  auto* sweep_estimator_opt =
      sweep->add_option("--estimator", sweep_estimator, "Propensity estimator: logreg | forest")
          ->check(CLI::IsMember({"logreg", "forest"}));
  auto* sweep_stat_opt =
      sweep->add_option("--stat", sweep_stat, "Statistic mode: literal | mcnemar")
          ->check(CLI::IsMember({"literal", "mcnemar"}));
  sweep->add_option("--out-csv", sweep_out_csv, "Sweep CSV output path");
  sweep->add_option("--out-json", sweep_out_json, "Sweep report JSON output path");
  sweep->add_option("--cache-dir", sweep_cache_dir, "Directory for propensity score caches");
  CommonFlags sweep_common;
  sweep_common.attach(sweep);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a confounded synthetic corpus pair");
  std::string synth_config, synth_out;
  uint64_t synth_seed = 0;
  synth->add_option("--config", synth_config, "Synth configuration JSON file");
  auto* synth_seed_opt = synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (ingest->parsed()) {
      return run_ingest(ingest_format, ingest_input, ingest_fake, ingest_real, ingest_source,
                        ingest_output);
    }
    if (rank->parsed()) {
      psm::RunConfig rc = rank_common.resolve();
      if (rank_estimator_opt->count()) rc.estimator = psm::estimator_from_name(rank_estimator);
      if (rank_stat_opt->count()) rc.stat_mode = psm::stat_mode_from_name(rank_stat);
      if (rank_caliper_opt->count()) {
        if (!(rank_caliper > 0.0)) throw psm::ConfigError("rank: --caliper must be > 0");
        rc.caliper = rank_caliper;
      }
      rc.validate();
      return run_rank(rc, rank_corpus, rank_method, rank_output, rank_pairs_csv, rank_top);
    }
    if (sweep->parsed()) {
      psm::RunConfig rc = sweep_common.resolve();
      if (sweep_classifier_opt->count())
        rc.classifier = psm::classifier_from_name(sweep_classifier);
      if (sweep_grid_opt->count()) rc.grid = psm::parse_grid(sweep_grid);
      if (sweep_estimator_opt->count()) rc.estimator = psm::estimator_from_name(sweep_estimator);
      if (sweep_stat_opt->count()) rc.stat_mode = psm::stat_mode_from_name(sweep_stat);
      rc.validate();
      return run_sweep(rc, sweep_train, sweep_test, sweep_methods, sweep_out_csv, sweep_out_json,
                       sweep_cache_dir);
    }
    if (synth->parsed()) {
      return run_synth(synth_config, synth_seed, synth_seed_opt->count() > 0, synth_out);
    }
  } catch (const psm::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
