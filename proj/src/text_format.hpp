#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace synsearch::detail {

/// Shortest-safe decimal rendering that round-trips a double (17 significant digits).
std::string format_g17(double value);

double parse_double(std::string_view text);

std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace synsearch::detail
