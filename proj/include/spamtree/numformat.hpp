#pragma once

#include <string>

namespace spamtree {

// Shortest decimal string that strtod() parses back to exactly v.
// Used everywhere a threshold or prediction value is written out, so that
// serialized models survive a round trip bit-for-bit.
std::string shortest_decimal(double v);

// Instance counts carried by tree leaves print with a trailing ".0" when
// integral ("824.0"), matching the usual decision-tree dump style.
std::string format_weight(double v);

// "(covered/errors)", errors omitted when zero: "(824.0/29.0)", "(8.0)".
std::string format_counts(double covered, double errors);

// Half-up rounding to the given number of decimals (0.0005 -> 0.001).
double round_half_up(double v, int decimals);

// Fixed-point rendering after half-up rounding, e.g. 0.93 -> "0.930".
std::string format_fixed(double v, int decimals);

}  // namespace spamtree
