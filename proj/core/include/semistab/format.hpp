#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace semistab {

// Shortest decimal text that parses back to the same double.
// Non-finite values format as "inf", "-inf", "nan".
std::string format_double(double value);

double parse_double(std::string_view text);
long long parse_integer(std::string_view text);

// Splits on commas and/or whitespace, dropping empty fields.
std::vector<std::string> split_list(std::string_view text);
std::vector<double> parse_double_list(std::string_view text);

// "1-12" or "1..12" expand to the inclusive range; otherwise a plain list.
std::vector<int> parse_index_list(std::string_view text);

std::string_view trim(std::string_view text);

}  // namespace semistab
