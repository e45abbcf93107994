#include "psm/synth.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "psm/errors.hpp"
#include "psm/rng.hpp"
#include "psm/util.hpp"

namespace psm {

namespace {

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigError(std::string("synth: ") + name + " must be in [0, 1]");
}

// Pure-alphabetic suffix so tokens contain no digits and always survive the
// tokenizer: 0 -> "aaa", 1 -> "aab", ...
std::string alpha_suffix(int index, int width = 3) {
  std::string s(static_cast<size_t>(width), 'a');
  for (int pos = width - 1; pos >= 0 && index > 0; --pos) {
    s[static_cast<size_t>(pos)] = static_cast<char>('a' + index % 26);
    index /= 26;
  }
  return s;
}

std::vector<std::string> make_tokens(const std::string& prefix, int count) {
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) out.push_back(prefix + alpha_suffix(i));
  return out;
}

Corpus generate_split(const SynthConfig& cfg, double rho, const std::string& tag,
                      uint64_t seed, const std::vector<std::string>& causal_fake,
                      const std::vector<std::string>& causal_real,
                      const std::vector<std::string>& confounder,
                      const std::vector<std::string>& noise) {
  Rng rng(seed);
  Corpus corpus;
  corpus.source = tag;
  corpus.docs.reserve(static_cast<size_t>(cfg.n_docs));
  for (int i = 0; i < cfg.n_docs; ++i) {
    const int label = rng.bernoulli(0.5) ? 1 : 0;
    const bool z = rng.bernoulli(label ? rho : 1.0 - rho);

    std::vector<std::string> words;
    for (const auto& w : causal_fake) {
      if (rng.bernoulli(label ? cfg.p_causal_hi : cfg.p_causal_lo)) words.push_back(w);
    }
    for (const auto& w : causal_real) {
      if (rng.bernoulli(label ? cfg.p_causal_lo : cfg.p_causal_hi)) words.push_back(w);
    }
    for (const auto& w : confounder) {
      if (rng.bernoulli(z ? cfg.p_conf_hi : cfg.p_conf_lo)) words.push_back(w);
    }
    for (const auto& w : noise) {
      if (rng.bernoulli(cfg.p_noise)) words.push_back(w);
    }

    Document doc;
    {
      std::ostringstream id;
      id << tag << "-" << i;
      doc.id = id.str();
    }
    doc.title = join(words, " ");
    doc.label = label;
    doc.source = tag;
    corpus.docs.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace

void SynthConfig::validate() const {
  if (n_docs < 1) throw ConfigError("synth: n_docs must be >= 1");
  if (n_causal_fake < 0 || n_causal_real < 0 || n_confounder < 0 || n_noise < 0)
    throw ConfigError("synth: vocabulary partition sizes must be >= 0");
  if (n_causal_fake + n_causal_real + n_confounder + n_noise < 1)
    throw ConfigError("synth: vocabulary must contain at least one word");
  check_prob(p_causal_hi, "p_causal_hi");
  check_prob(p_causal_lo, "p_causal_lo");
  check_prob(p_conf_hi, "p_conf_hi");
  check_prob(p_conf_lo, "p_conf_lo");
  check_prob(rho_train, "rho_train");
  check_prob(rho_test, "rho_test");
  check_prob(p_noise, "p_noise");
  if (!(p_causal_hi > p_causal_lo))
    throw ConfigError("synth: p_causal_hi must exceed p_causal_lo");
  if (!(p_conf_hi > p_conf_lo)) throw ConfigError("synth: p_conf_hi must exceed p_conf_lo");
}

SynthOutput generate(const SynthConfig& cfg) {
  cfg.validate();
  const auto causal_fake = make_tokens("cfake", cfg.n_causal_fake);
  const auto causal_real = make_tokens("creal", cfg.n_causal_real);
  const auto confounder = make_tokens("conf", cfg.n_confounder);
  const auto noise = make_tokens("noise", cfg.n_noise);

  SynthOutput out;
  out.train = generate_split(cfg, cfg.rho_train, "synth-train",
                             derive_seed(cfg.seed, seed_stream::synth_train), causal_fake,
                             causal_real, confounder, noise);
  out.test = generate_split(cfg, cfg.rho_test, "synth-test",
                            derive_seed(cfg.seed, seed_stream::synth_test), causal_fake,
                            causal_real, confounder, noise);
  out.truth = causal_fake;
  out.truth.insert(out.truth.end(), causal_real.begin(), causal_real.end());
  return out;
}

void write_synth_output(const SynthOutput& out, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  write_jsonl(out.train, (base / "train.jsonl").string());
  write_jsonl(out.test, (base / "test.jsonl").string());
  std::ofstream truth((base / "truth.txt").string(), std::ios::binary);
  if (!truth) throw std::runtime_error("cannot write file: " + (base / "truth.txt").string());
  for (const auto& tok : out.truth) truth << tok << "\n";
  if (!truth) throw std::runtime_error("write failed: " + (base / "truth.txt").string());
}

namespace {

template <typename T>
void load_synth_field(const nlohmann::ordered_json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ConfigError(std::string("synth config: bad value for '") + key + "'");
  }
}

}  // namespace

SynthConfig SynthConfig::from_json_string(const std::string& text) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("synth config: invalid json: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("synth config: top level must be an object");
  static const std::vector<std::string> known = {
      "n_docs", "n_causal_fake", "n_causal_real", "n_confounder", "n_noise",
      "p_causal_hi", "p_causal_lo", "p_conf_hi", "p_conf_lo",
      "rho_train", "rho_test", "p_noise", "seed"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("synth config: unknown key '" + key + "'");
  }
  SynthConfig cfg;
  load_synth_field(j, "n_docs", cfg.n_docs);
  load_synth_field(j, "n_causal_fake", cfg.n_causal_fake);
  load_synth_field(j, "n_causal_real", cfg.n_causal_real);
  load_synth_field(j, "n_confounder", cfg.n_confounder);
  load_synth_field(j, "n_noise", cfg.n_noise);
  load_synth_field(j, "p_causal_hi", cfg.p_causal_hi);
  load_synth_field(j, "p_causal_lo", cfg.p_causal_lo);
  load_synth_field(j, "p_conf_hi", cfg.p_conf_hi);
  load_synth_field(j, "p_conf_lo", cfg.p_conf_lo);
  load_synth_field(j, "rho_train", cfg.rho_train);
  load_synth_field(j, "rho_test", cfg.rho_test);
  load_synth_field(j, "p_noise", cfg.p_noise);
  load_synth_field(j, "seed", cfg.seed);
  cfg.validate();
  return cfg;
}

SynthConfig SynthConfig::from_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json_string(ss.str());
}

std::string SynthConfig::to_json_string() const {
  nlohmann::ordered_json j;
  j["n_docs"] = n_docs;
  j["n_causal_fake"] = n_causal_fake;
  j["n_causal_real"] = n_causal_real;
  j["n_confounder"] = n_confounder;
  j["n_noise"] = n_noise;
  j["p_causal_hi"] = p_causal_hi;
  j["p_causal_lo"] = p_causal_lo;
  j["p_conf_hi"] = p_conf_hi;
  j["p_conf_lo"] = p_conf_lo;
  j["rho_train"] = rho_train;
  j["rho_test"] = rho_test;
  j["p_noise"] = p_noise;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

}  // namespace psm
