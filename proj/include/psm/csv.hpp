#pragma once

#include <string>
#include <vector>

namespace psm {

// Minimal RFC 4180 CSV support: quoted fields may contain commas, doubled
// quotes and newlines. Parses the whole document at once.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::vector<std::vector<std::string>> read_csv_file(const std::string& path);

// Quotes a field only when it needs quoting.
std::string csv_escape(const std::string& field);

}  // namespace psm
