#pragma once

// Multi-instance studies: approximation sequences in the potential metric,
// top eigenvalue versus box size, exponent tables, lacunary witnesses, and
// the decay bounds for vectors in the range of the generator. Instances run
// in parallel; rows are assembled in config order so output is identical
// for any job count.

#include <cstdint>

#include <Eigen/Core>

#include "semistab/potential.hpp"
#include "semistab/report.hpp"
#include "semistab/study_config.hpp"

namespace semistab {

struct RunOptions {
  /// 0 keeps the job count from the config.
  int jobs = 0;
  /// Multiplies the bounds of the section3-bounds study; values below 1
  /// deliberately tighten them. Only test builds expose this.
  double bound_scale = 1.0;
};

[[nodiscard]] StudyReport run_study(const StudyConfig& config, const RunOptions& options = {});

[[nodiscard]] StudyReport approximation_study(const Potential& v, const ApproximationParams& params,
                                              std::uint64_t seed, int jobs = 1);

/// v must vanish outside a bounded set (DomainError otherwise).
[[nodiscard]] StudyReport gap_vs_box(const Potential& v, const GapVsBoxParams& params, int jobs = 1);

/// Every delta must lie in (1/2, 1) and every gamma must be > 0 (DomainError).
[[nodiscard]] StudyReport exponent_table(const ExponentTableParams& params, int jobs = 1);

/// Rejects horizons with t_max < 100 or t_max / t_min < 100 (DomainError).
[[nodiscard]] StudyReport gdelta_witness(const GdeltaWitnessParams& params, int jobs = 1);

[[nodiscard]] StudyReport section3_bounds(const Section3Params& params, std::uint64_t seed, int jobs = 1,
                                          double bound_scale = 1.0);

/// Seeded probe vectors: uniform components in [-1, 1], normalized.
[[nodiscard]] std::vector<Eigen::VectorXd> probe_vectors(Eigen::Index size, int count, std::uint64_t seed);

}  // namespace semistab
