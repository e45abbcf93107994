#pragma once

#include <string>
#include <vector>

#include "psm/corpus.hpp"
#include "psm/matching.hpp"
#include "psm/matrix.hpp"
#include "psm/propensity.hpp"

namespace psm {

enum class RankMethod { Psm, Df };

struct RankEntry {
  int feature = -1;
  std::string token;
  double score = 0.0;
};

// One entry per vocabulary feature, sorted by score descending, ties broken
// by token ascending. fingerprint identifies the upstream configuration.
struct FeatureRanking {
  std::vector<RankEntry> entries;
  RankMethod method = RankMethod::Df;
  std::string fingerprint;
};

// For each feature: match treatment (feature present) against control
// documents on the feature's propensity column, then score with the paired
// chi-square. Skipped or unmatchable features score 0 and rank last, so the
// feature count stays constant across methods.
FeatureRanking rank_psm(const BinaryTermMatrix& matrix, const Vocabulary& vocab,
                        const PropensityTable& table, StatMode mode,
                        double caliper = kUnboundedCaliper,
                        const std::string& fingerprint = "", int workers = 1);

// Document-frequency baseline: score = number of documents containing the
// feature. Labels are not consulted.
FeatureRanking rank_df(const BinaryTermMatrix& matrix, const Vocabulary& vocab,
                       const std::string& fingerprint = "");

// The first ceil(percent/100 * V) entries' feature ids (at least one).
// percent must lie in (0, 100].
std::vector<int> select_top(const FeatureRanking& ranking, double percent);

void write_ranking_csv(const FeatureRanking& ranking, const std::string& path);
FeatureRanking read_ranking_csv(const std::string& path);

const char* rank_method_name(RankMethod m);
RankMethod rank_method_from_name(const std::string& name);

// Audit dump of every feature's matched pairs:
// columns feature, treatment_id, control_id, gap.
void write_pairs_csv(const BinaryTermMatrix& matrix, const Vocabulary& vocab,
                     const PropensityTable& table, const Corpus& corpus, double caliper,
                     const std::string& path);

}  // namespace psm
