#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "psm/corpus.hpp"

namespace psm {

// Generator for corpora with a planted latent confounder Z and a known
// causal vocabulary. Labels are Bernoulli(0.5); Z is drawn conditionally on
// the label with P(Z=1|fake) = rho, so rho_train vs rho_test is the
// distribution-shift knob. Causal words fire on the label, confounder words
// on Z, noise words unconditionally.
struct SynthConfig {
  int n_docs = 2000;
  int n_causal_fake = 20;
  int n_causal_real = 20;
  int n_confounder = 20;
  int n_noise = 200;
  double p_causal_hi = 0.30;
  double p_causal_lo = 0.05;
  double p_conf_hi = 0.40;
  double p_conf_lo = 0.05;
  double rho_train = 0.9;
  double rho_test = 0.1;
  double p_noise = 0.10;
  uint64_t seed = 0;

  void validate() const;  // throws ConfigError

  static SynthConfig from_json_string(const std::string& text);
  static SynthConfig from_json_file(const std::string& path);
  std::string to_json_string() const;
};

struct SynthOutput {
  Corpus train;
  Corpus test;
  std::vector<std::string> truth;  // the causal tokens (fake then real)
};

SynthOutput generate(const SynthConfig& cfg);

// Writes train.jsonl, test.jsonl and truth.txt into the directory.
void write_synth_output(const SynthOutput& out, const std::string& dir);

}  // namespace psm
