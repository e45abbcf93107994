#include "psm/matching.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace psm {

MatchedPairs greedy_match(std::span<const double> scores, std::span<const int> treatment_mask,
                          double caliper) {
  if (scores.size() != treatment_mask.size())
    throw std::runtime_error("greedy_match: scores and treatment_mask size mismatch");
  if (!(caliper > 0.0))
    throw std::runtime_error("greedy_match: caliper must be positive");

  MatchedPairs out;
  out.caliper = caliper;

  std::vector<int> treatments;
  std::set<std::pair<double, int>> controls;  // (score, index), ascending
  for (size_t i = 0; i < scores.size(); ++i) {
    if (treatment_mask[i]) {
      treatments.push_back(static_cast<int>(i));
    } else {
      controls.emplace(scores[i], static_cast<int>(i));
    }
  }
  if (treatments.empty()) {
    out.note = "no treatment units";
    return out;
  }
  if (controls.empty()) {
    out.note = "no control units";
    return out;
  }

  std::stable_sort(treatments.begin(), treatments.end(), [&](int a, int b) {
    const double sa = scores[static_cast<size_t>(a)];
    const double sb = scores[static_cast<size_t>(b)];
    if (sa != sb) return sa > sb;
    return a < b;
  });

  // Lowest-index control holding the given score value.
  auto first_with_score = [&](double score) {
    return controls.lower_bound({score, std::numeric_limits<int>::min()});
  };

  out.pairs.reserve(std::min(treatments.size(), controls.size()));
  for (int t : treatments) {
    if (controls.empty()) break;
    const double st = scores[static_cast<size_t>(t)];

    auto above = first_with_score(st);  // first control with score >= st
    bool have_above = above != controls.end();
    bool have_below = above != controls.begin();
    double gap_above = have_above ? above->first - st : 0.0;
    double gap_below = 0.0;
    std::set<std::pair<double, int>>::iterator below;
    if (have_below) {
      below = first_with_score(std::prev(above)->first);  // lowest index at that score
      gap_below = st - below->first;
    }

    std::set<std::pair<double, int>>::iterator best;
    double best_gap;
    if (have_above && (!have_below || gap_above < gap_below ||
                       (gap_above == gap_below && above->second < below->second))) {
      best = above;
      best_gap = gap_above;
    } else {
      best = below;
      best_gap = gap_below;
    }

    if (best_gap > caliper) continue;  // unmatched; control not consumed
    out.pairs.push_back({t, best->second, best_gap});
    controls.erase(best);
  }
  return out;
}

PairStatistic pair_statistic(const MatchedPairs& matched, std::span<const int> labels,
                             StatMode mode) {
  PairStatistic stat;
  stat.mode = mode;
  for (const auto& p : matched.pairs) {
    if (p.treatment < 0 || static_cast<size_t>(p.treatment) >= labels.size() ||
        p.control < 0 || static_cast<size_t>(p.control) >= labels.size()) {
      throw std::runtime_error("pair_statistic: pair index out of range");
    }
    const int lt = labels[static_cast<size_t>(p.treatment)];
    const int lc = labels[static_cast<size_t>(p.control)];
    if (mode == StatMode::Literal) {
      if (lt == 0) ++stat.tn;
      if (lc == 1) ++stat.cp;
    } else {
      if (lt == 0 && lc == 1) ++stat.tn;
      if (lt == 1 && lc == 0) ++stat.cp;
    }
  }
  const long denom = stat.tn + stat.cp;
  if (denom > 0) {
    const double diff = static_cast<double>(stat.tn - stat.cp);
    stat.chi_square = diff * diff / static_cast<double>(denom);
  }
  return stat;
}

const char* stat_mode_name(StatMode mode) {
  return mode == StatMode::Literal ? "literal" : "mcnemar";
}

StatMode stat_mode_from_name(const std::string& name) {
  if (name == "literal") return StatMode::Literal;
  if (name == "mcnemar") return StatMode::McNemar;
  throw std::runtime_error("unknown statistic mode: " + name);
}

}  // namespace psm
