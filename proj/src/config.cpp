#include "psm/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "psm/errors.hpp"
#include "psm/util.hpp"

namespace psm {

using nlohmann::ordered_json;

namespace {

void reject_unknown_keys(const ordered_json& obj, const std::set<std::string>& known,
                         const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (!known.count(key)) {
      throw ConfigError("config: unknown key '" + key + "' in " + where);
    }
  }
}

template <typename T>
void load_field(const ordered_json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
}

}  // namespace

void RunConfig::validate() const {
  if (vocab.min_df < 1) throw ConfigError("config: vocab.min_df must be >= 1");
  if (!(vocab.max_df_ratio > 0.0 && vocab.max_df_ratio <= 1.0))
    throw ConfigError("config: vocab.max_df_ratio must be in (0, 1]");
  if (vocab.max_features < 0)
    throw ConfigError("config: vocab.max_features must be >= 0 (0 = unlimited)");
  if (!(train.learning_rate > 0.0)) throw ConfigError("config: train.learning_rate must be > 0");
  if (train.max_epochs < 1) throw ConfigError("config: train.max_epochs must be >= 1");
  if (train.l2_lambda < 0.0) throw ConfigError("config: train.l2_lambda must be >= 0");
  if (!(train.tolerance > 0.0)) throw ConfigError("config: train.tolerance must be > 0");
  if (forest.tree_count < 1) throw ConfigError("config: forest.tree_count must be >= 1");
  if (forest.max_depth < 0) throw ConfigError("config: forest.max_depth must be >= 0");
  if (forest.features_per_split < 0)
    throw ConfigError("config: forest.features_per_split must be >= 0");
  if (!(caliper > 0.0)) throw ConfigError("config: matching.caliper must be > 0 or null");
  if (grid.empty()) throw ConfigError("config: eval.grid must be non-empty");
  for (double p : grid) {
    if (!(p > 0.0 && p <= 100.0))
      throw ConfigError("config: eval.grid values must be in (0, 100]");
  }
  if (workers < 0) throw ConfigError("config: workers must be >= 0");
}

std::string RunConfig::to_json_string() const {
  ordered_json j;
  j["seed"] = seed;
  j["workers"] = workers;
  j["balance"] = balance;
  j["vocab"] = {{"min_df", vocab.min_df},
                {"max_df_ratio", vocab.max_df_ratio},
                {"max_features", vocab.max_features},
                {"remove_stopwords", vocab.remove_stopwords}};
  j["train"] = {{"learning_rate", train.learning_rate},
                {"max_epochs", train.max_epochs},
                {"l2_lambda", train.l2_lambda},
                {"tolerance", train.tolerance}};
  j["forest"] = {{"tree_count", forest.tree_count},
                 {"max_depth", forest.max_depth},
                 {"features_per_split", forest.features_per_split}};
  j["propensity"] = {{"estimator", estimator_name(estimator)}};
  if (std::isinf(caliper)) {
    j["matching"] = {{"stat", stat_mode_name(stat_mode)}, {"caliper", nullptr}};
  } else {
    j["matching"] = {{"stat", stat_mode_name(stat_mode)}, {"caliper", caliper}};
  }
  j["eval"] = {{"classifier", classifier_name(classifier)}, {"grid", grid}};
  return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json_string(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: invalid json: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: top level must be an object");

  RunConfig rc;
  reject_unknown_keys(j, {"seed", "workers", "balance", "vocab", "train", "forest",
                          "propensity", "matching", "eval"},
                      "top level");
  load_field(j, "seed", rc.seed);
  load_field(j, "workers", rc.workers);
  load_field(j, "balance", rc.balance);

  if (j.contains("vocab")) {
    const auto& v = j["vocab"];
    reject_unknown_keys(v, {"min_df", "max_df_ratio", "max_features", "remove_stopwords"},
                        "vocab");
    load_field(v, "min_df", rc.vocab.min_df);
    load_field(v, "max_df_ratio", rc.vocab.max_df_ratio);
    load_field(v, "max_features", rc.vocab.max_features);
    load_field(v, "remove_stopwords", rc.vocab.remove_stopwords);
  }
  if (j.contains("train")) {
    const auto& t = j["train"];
    reject_unknown_keys(t, {"learning_rate", "max_epochs", "l2_lambda", "tolerance"}, "train");
    load_field(t, "learning_rate", rc.train.learning_rate);
    load_field(t, "max_epochs", rc.train.max_epochs);
    load_field(t, "l2_lambda", rc.train.l2_lambda);
    load_field(t, "tolerance", rc.train.tolerance);
  }
  if (j.contains("forest")) {
    const auto& f = j["forest"];
    reject_unknown_keys(f, {"tree_count", "max_depth", "features_per_split"}, "forest");
    load_field(f, "tree_count", rc.forest.tree_count);
    load_field(f, "max_depth", rc.forest.max_depth);
    load_field(f, "features_per_split", rc.forest.features_per_split);
  }
  if (j.contains("propensity")) {
    const auto& p = j["propensity"];
    reject_unknown_keys(p, {"estimator"}, "propensity");
    if (p.contains("estimator")) {
      try {
        rc.estimator = estimator_from_name(p.at("estimator").get<std::string>());
      } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
    }
  }
  if (j.contains("matching")) {
    const auto& m = j["matching"];
    reject_unknown_keys(m, {"stat", "caliper"}, "matching");
    if (m.contains("stat")) {
      try {
        rc.stat_mode = stat_mode_from_name(m.at("stat").get<std::string>());
      } catch (const std::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
      }
    }
    if (m.contains("caliper")) {
      if (m.at("caliper").is_null()) {
        rc.caliper = kUnboundedCaliper;
      } else {
        load_field(m, "caliper", rc.caliper);
      }
    }
  }
  if (j.contains("eval")) {
    const auto& e = j["eval"];
    reject_unknown_keys(e, {"classifier", "grid"}, "eval");
    if (e.contains("classifier")) {
      try {
        rc.classifier = classifier_from_name(e.at("classifier").get<std::string>());
      } catch (const std::exception& ex) {
        throw ConfigError(std::string("config: ") + ex.what());
      }
    }
    load_field(e, "grid", rc.grid);
  }
  rc.validate();
  return rc;
}

RunConfig RunConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

std::string RunConfig::fingerprint() const {
  // workers changes execution, never results, so it stays out of the hash
  RunConfig canonical = *this;
  canonical.workers = 0;
  return to_hex(fnv1a64(canonical.to_json_string()));
}

std::vector<double> parse_grid(const std::string& csv_list) {
  std::vector<double> out;
  std::stringstream ss(csv_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      throw ConfigError("invalid grid value: '" + item + "'");
    }
    if (pos != item.size()) throw ConfigError("invalid grid value: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("grid must contain at least one value");
  return out;
}

}  // namespace psm
