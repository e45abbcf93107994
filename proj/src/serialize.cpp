#include "psm/serialize.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace psm {

using nlohmann::ordered_json;

namespace {

void write_json_file(const ordered_json& j, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << j.dump(2) << "\n";
  if (!out) throw std::runtime_error("write failed: " + path);
}

ordered_json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return ordered_json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(path + ": invalid json: " + e.what());
  }
}

}  // namespace

void save_linear_model(const LinearModel& model, const std::string& path) {
  ordered_json j;
  j["kind"] = model.kind == ModelKind::Logistic ? "logistic" : "svm";
  j["bias"] = model.bias;
  j["weights"] = model.weights;
  write_json_file(j, path);
}

LinearModel load_linear_model(const std::string& path) {
  const ordered_json j = read_json_file(path);
  LinearModel model;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "logistic") {
    model.kind = ModelKind::Logistic;
  } else if (kind == "svm") {
    model.kind = ModelKind::Svm;
  } else {
    throw std::runtime_error(path + ": unknown model kind '" + kind + "'");
  }
  model.bias = j.at("bias").get<double>();
  model.weights = j.at("weights").get<std::vector<double>>();
  return model;
}

void save_forest(const Forest& forest, const std::string& path) {
  ordered_json j;
  j["kind"] = "forest";
  j["params"] = {{"tree_count", forest.params.tree_count},
                 {"max_depth", forest.params.max_depth},
                 {"features_per_split", forest.params.features_per_split}};
  j["seed"] = forest.seed;
  j["n_features"] = forest.n_features;
  ordered_json trees = ordered_json::array();
  for (const auto& tree : forest.trees) {
    ordered_json nodes = ordered_json::array();
    for (const auto& node : tree.nodes) {
      nodes.push_back({{"feature", node.feature},
                       {"value", node.value},
                       {"left", node.left},
                       {"right", node.right}});
    }
    trees.push_back({{"nodes", std::move(nodes)}});
  }
  j["trees"] = std::move(trees);
  write_json_file(j, path);
}

Forest load_forest(const std::string& path) {
  const ordered_json j = read_json_file(path);
  if (j.at("kind").get<std::string>() != "forest")
    throw std::runtime_error(path + ": not a forest model");
  Forest forest;
  const auto& params = j.at("params");
  forest.params.tree_count = params.at("tree_count").get<int>();
  forest.params.max_depth = params.at("max_depth").get<int>();
  forest.params.features_per_split = params.at("features_per_split").get<int>();
  forest.seed = j.at("seed").get<uint64_t>();
  forest.n_features = j.at("n_features").get<int>();
  for (const auto& t : j.at("trees")) {
    Tree tree;
    for (const auto& n : t.at("nodes")) {
      TreeNode node;
      node.feature = n.at("feature").get<int>();
      node.value = n.at("value").get<double>();
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
      tree.nodes.push_back(node);
    }
    forest.trees.push_back(std::move(tree));
  }
  return forest;
}

}  // namespace psm
