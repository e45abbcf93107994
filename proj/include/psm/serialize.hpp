#pragma once

#include <string>

#include "psm/learners.hpp"

namespace psm {

// Models serialize to a single JSON document. Doubles use the shortest
// round-trip decimal form, so write -> read -> write is byte-identical and
// values are exact.
void save_linear_model(const LinearModel& model, const std::string& path);
LinearModel load_linear_model(const std::string& path);

void save_forest(const Forest& forest, const std::string& path);
Forest load_forest(const std::string& path);

}  // namespace psm
