#pragma once

// Study configuration files (INI syntax: [section] headers, key = value,
// ';' or '#' comments). Unknown sections or keys are rejected so typos
// cannot silently fall back to defaults.
//
//   [study]          kind, seed, output, jobs
//   [potential]      a potential descriptor (see potential.hpp)
//   [approximation]  sequences, truncation_indices, shift_indices, L, h,
//                    probes, tail_tol, metric_target, resolvent_tol
//   [gap_vs_box]     L_list, h
//   [exponent_table] delta_list, gamma_list, eps_min, eps_max, n_scales,
//                    t_min, t_max, n_t, tail_fraction, scale_tol, decay_tol
//   [gdelta_witness] base, exponents, n_atoms, eps_min, eps_max, n_scales,
//                    alpha, beta_exp_power, beta_poly_power, t_min, t_max,
//                    n_t, expect, d_minus_max, d_plus_min, log_threshold
//   [section3]       measures, atoms, max_distance, t_min, t_max, n_t,
//                    shifted_measures, shifts

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "semistab/magnitude.hpp"

namespace semistab {

enum class StudyKind { kApproximation, kGapVsBox, kExponentTable, kGdeltaWitness, kSection3Bounds };

[[nodiscard]] std::string to_string(StudyKind kind);
[[nodiscard]] StudyKind parse_study_kind(const std::string& text);

struct ApproximationParams {
  bool truncation = true;
  bool shift = true;
  std::vector<int> truncation_indices{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12};
  std::vector<int> shift_indices{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};
  double half_width = 20.0;
  double spacing = 0.05;
  int probes = 3;
  double tail_tol = 1e-6;
  double metric_target = 1e-3;
  /// Solver-level floor: lhs must fall below 10 * resolvent_tol once
  /// metric_d < 1e-6.
  double resolvent_tol = 1e-10;
};

struct GapVsBoxParams {
  std::vector<double> half_widths{10.0, 20.0, 40.0};
  double spacing = 0.1;
};

struct ExponentTableParams {
  std::vector<double> deltas{0.6, 0.75, 0.9};
  std::vector<double> gammas{0.5, 1.0, 2.0, 3.5};
  double eps_min = 1e-6;
  double eps_max = 0.1;
  int n_scales = 64;
  double t_min = 10.0;
  double t_max = 1e6;
  int n_t = 200;
  double tail_fraction = 0.8;
  double scale_tol = 1e-3;
  double decay_tol = 0.05;
};

struct GdeltaWitnessParams {
  double base = 0.5;
  /// Repeated cyclically up to n_atoms entries.
  std::vector<double> exponents{0.5, 4.0};
  int n_atoms = 12;
  Magnitude eps_min = Magnitude::pow2(-2048);
  Magnitude eps_max = Magnitude::pow2(-4);
  int n_scales = 64;
  double alpha = 0.1;
  double beta_exp_power = 0.5;
  double beta_poly_power = 0.0;
  double t_min = 10.0;
  double t_max = 1e12;
  int n_t = 2000;
  /// "oscillation": d_minus <= d_minus_max, d_plus >= d_plus_min and both
  /// probe thresholds. "none": control run; the alpha-weighted orbit must
  /// stay below the threshold.
  std::string expect = "oscillation";
  double d_minus_max = 0.7;
  double d_plus_min = 3.0;
  double log_threshold = 6.9;
};

struct Section3Params {
  int measures = 100;
  int atoms = 20;
  double max_distance = 10.0;
  double t_min = 1e-2;
  double t_max = 1e3;
  int n_t = 200;
  int shifted_measures = 50;
  std::vector<double> shifts{0.5, 1.0, 2.0};
};

struct StudyConfig {
  StudyKind kind = StudyKind::kSection3Bounds;
  std::uint64_t seed = 1;
  std::filesystem::path output;  // empty: caller decides
  int jobs = 1;
  std::map<std::string, std::string> potential;  // raw descriptor fields
  ApproximationParams approximation;
  GapVsBoxParams gap_vs_box;
  ExponentTableParams exponent_table;
  GdeltaWitnessParams gdelta_witness;
  Section3Params section3;
  std::string source_text;  // verbatim file contents, echoed in provenance
};

/// Throws ParseError on malformed input or unknown keys, DomainError on
/// nonpositive tolerances or invalid grids.
[[nodiscard]] StudyConfig parse_study_config(const std::string& text);
[[nodiscard]] StudyConfig load_study_config(const std::filesystem::path& path);

/// Directory a study writes to: explicit override, then the config's
/// output key, then $SEMISTAB_OUTPUT_DIR/<kind>, then ./semistab-out/<kind>.
[[nodiscard]] std::filesystem::path resolve_output_dir(const StudyConfig& config,
                                                       const std::filesystem::path& override_dir = {});

}  // namespace semistab
