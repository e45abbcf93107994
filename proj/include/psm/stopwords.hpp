#pragma once

#include <string>
#include <unordered_set>

namespace psm {

// Built-in English stopword list, pinned so vocabularies are reproducible
// across machines and releases.
extern const char* const kStopwordListVersion;

const std::unordered_set<std::string>& english_stopwords();

bool is_stopword(const std::string& token);

}  // namespace psm
