#pragma once

#include <string>

namespace satact {

// Shortest round-trip decimal form of v ("nan", "inf", "-inf" for non-finite).
// Locale-independent, so CSV output is byte-stable across runs and hosts.
std::string format_real(double v);

}  // namespace satact
