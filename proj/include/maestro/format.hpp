#pragma once

#include <string>
#include <vector>

namespace maestro {

// Canonical number rendering for reports, DOT labels and CSV cells: integers
// print without a decimal point, everything else with up to 12 significant
// digits. Stable across runs for identical inputs.
std::string format_number(double v);

std::string join(const std::vector<std::string>& parts, const std::string& sep);

}  // namespace maestro
