#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace psm {

constexpr double kUnboundedCaliper = std::numeric_limits<double>::infinity();

struct MatchedPair {
  int treatment = -1;
  int control = -1;
  double gap = 0.0;  // absolute propensity-score difference
};

struct MatchedPairs {
  std::vector<MatchedPair> pairs;
  int feature = -1;
  double caliper = kUnboundedCaliper;
  std::string note;  // set when a side was empty and no matching ran
};

enum class StatMode { Literal, McNemar };

struct PairStatistic {
  long tn = 0;
  long cp = 0;
  double chi_square = 0.0;
  StatMode mode = StatMode::Literal;
};

// One-to-one greedy matching without replacement. Treatment units are
// processed in descending score order (ties: lower document index first);
// each takes the unmatched control with the smallest absolute score gap
// (ties: lower document index). With a bounded caliper, a treatment unit
// whose best gap exceeds it stays unmatched. An empty treatment or control
// side yields empty pairs with a note instead of an error.
MatchedPairs greedy_match(std::span<const double> scores, std::span<const int> treatment_mask,
                          double caliper = kUnboundedCaliper);

// Eq-style paired statistic chi^2 = (TN-CP)^2 / (TN+CP), 0 when TN+CP = 0.
// Literal mode: TN counts pairs whose treatment document is labeled real,
// CP pairs whose control document is labeled fake. McNemar mode counts only
// discordant pairs: TN = (treatment real, control fake), CP = the reverse.
PairStatistic pair_statistic(const MatchedPairs& pairs, std::span<const int> labels,
                             StatMode mode);

const char* stat_mode_name(StatMode mode);
StatMode stat_mode_from_name(const std::string& name);

}  // namespace psm
