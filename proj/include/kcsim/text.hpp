#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kcsim {

// Fixed-point rendering, e.g. format_fixed(0.2941176, 6) == "0.294118".
std::string format_fixed(double value, int decimals = 6);

// Same as format_fixed but drops trailing zeros ("0.850000" -> "0.85").
std::string format_trimmed(double value, int decimals = 6);

std::string_view trim(std::string_view s);

std::vector<std::string> split(std::string_view s, char delim);

// Minimal RFC 4180 field splitting: quoted fields may contain the delimiter
// and doubled quotes.
std::vector<std::string> split_csv_line(std::string_view line);

}  // namespace kcsim
