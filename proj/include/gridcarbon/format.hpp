#pragma once

#include <string>
#include <vector>

namespace gridcarbon {

// Shortest round-trip decimal form of a double (std::to_chars). NaN -> "NA",
// infinities -> "inf"/"-inf". Used by every writer so outputs are
// byte-stable across runs and platforms.
std::string format_double(double value);

// Fixed-precision form, trailing zeros kept ("%.*f" semantics via to_chars).
std::string format_fixed(double value, int precision);

// One RFC-4180 CSV record: fields joined with commas, quoted when they
// contain a comma, quote, or newline, terminated with "\n".
std::string csv_record(const std::vector<std::string>& fields);

} // namespace gridcarbon
