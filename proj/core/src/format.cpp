#include "semistab/format.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include "semistab/errors.hpp"

namespace semistab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
  return {buf.data(), ptr};
}

std::string_view trim(std::string_view text) {
  constexpr std::string_view ws = " \t\r\n";
  const auto first = text.find_first_not_of(ws);
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(ws);
  return text.substr(first, last - first + 1);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text[0] == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("expected a number, got '" + std::string(text) + "'");
  }
  return value;
}

long long parse_integer(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text[0] == '+') text.remove_prefix(1);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ParseError("expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (const char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::vector<double> parse_double_list(std::string_view text) {
  std::vector<double> out;
  for (const auto& field : split_list(text)) out.push_back(parse_double(field));
  return out;
}

std::vector<int> parse_index_list(std::string_view text) {
  text = trim(text);
  for (const std::string_view sep : {std::string_view(".."), std::string_view("-")}) {
    const auto pos = text.find(sep, 1);
    if (pos != std::string_view::npos && text.find(',') == std::string_view::npos) {
      const auto lo = parse_integer(text.substr(0, pos));
      const auto hi = parse_integer(text.substr(pos + sep.size()));
      if (hi < lo) throw ParseError("empty index range '" + std::string(text) + "'");
      std::vector<int> out;
      for (auto i = lo; i <= hi; ++i) out.push_back(static_cast<int>(i));
      return out;
    }
  }
  std::vector<int> out;
  for (const auto& field : split_list(text)) out.push_back(static_cast<int>(parse_integer(field)));
  return out;
}

}  // namespace semistab
