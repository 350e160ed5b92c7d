#pragma once

// Plain-text measure records.
//
//   atomic <count> <total_mass>
//   <position> <weight>                      (count lines)
//
//   density <count> <s_lo> <s_hi> <total_mass>
//   <s> <rho>                                (count sample lines)
//   family <name> <parameters...>            (instead of samples)
//
// '#' starts a comment. Numbers use shortest round-trip decimals; values
// outside double range use "<mantissa>p<exp2>", so atomic records round-trip
// exactly.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "semistab/measure.hpp"

namespace semistab {

[[nodiscard]] SpectralMeasure read_measure(std::istream& in);
[[nodiscard]] SpectralMeasure parse_measure(const std::string& text);
[[nodiscard]] SpectralMeasure load_measure(const std::filesystem::path& path);

void write_measure(std::ostream& out, const SpectralMeasure& mu);
[[nodiscard]] std::string format_measure(const SpectralMeasure& mu);
void save_measure(const std::filesystem::path& path, const SpectralMeasure& mu);

}  // namespace semistab
