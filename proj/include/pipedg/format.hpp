#pragma once

#include <string>

namespace pipedg {

/// 17 significant digits: round-trips any 64-bit float through text.
std::string format_g17(double v);

/// Short form for labels and filenames (not round-trip exact).
std::string format_g(double v);

} // namespace pipedg
