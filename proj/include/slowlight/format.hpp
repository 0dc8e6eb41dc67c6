#pragma once

#include <string>

namespace slowlight {

/// Shortest decimal string that round-trips the double exactly (std::to_chars
/// shortest form). nan serializes as "nan", infinities as "inf"/"-inf".
std::string format_double(double value);

}  // namespace slowlight
