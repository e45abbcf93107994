#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psm/corpus.hpp"
#include "psm/learners.hpp"
#include "psm/matching.hpp"
#include "psm/propensity.hpp"

namespace psm {

// Every tunable of the pipeline in one serializable document. Unknown keys
// are rejected; values are validated against the owning module's invariants
// at load time. Defaults are documented in the README.
struct RunConfig {
  VocabOptions vocab;
  TrainConfig train;
  ForestParams forest;
  Estimator estimator = Estimator::Logistic;
  StatMode stat_mode = StatMode::Literal;
  double caliper = kUnboundedCaliper;  // serialized as null when unbounded
  Classifier classifier = Classifier::Logistic;
  std::vector<double> grid = {1, 2, 3, 5, 8, 10, 15, 20, 30, 40, 50, 65, 80, 100};
  bool balance = true;
  uint64_t seed = 0;
  int workers = 0;  // 0 = machine parallelism

  void validate() const;  // throws ConfigError

  std::string to_json_string() const;
  static RunConfig from_json_string(const std::string& text);
  static RunConfig from_json_file(const std::string& path);

  // Hash of the full canonical configuration; stamped onto rankings and
  // sweep reports so artifacts can be traced to their settings.
  std::string fingerprint() const;

  PropensityOptions propensity_options() const {
    PropensityOptions opts;
    opts.estimator = estimator;
    opts.train = train;
    opts.train.seed = seed;
    opts.forest = forest;
    return opts;
  }
};

std::vector<double> parse_grid(const std::string& csv_list);

}  // namespace psm
