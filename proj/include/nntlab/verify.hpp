#pragma once

// Property sweeps and the self-check suite behind `nntlab verify`.

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "nntlab/geomvol.hpp"

namespace nntlab {

struct SweepResult {
  std::size_t points = 0;
  std::size_t failures = 0;
  std::string first_failure;

  bool passed() const noexcept { return points > 0 && failures == 0; }
};

/// Stratified grid over d in {2,...,30}, theta in [0, pi] and admissible z;
/// `points` is rounded to a whole number of strata.
SweepResult lemma4_sweep(std::size_t points, std::uint64_t seed, const LensFn& lens);
/// Random (u, eps) pairs, half of them in the u >= 1.1, eps <= 1 regime.
SweepResult lemma5_sweep(std::size_t pairs, std::uint64_t seed);
/// Points drawn inside one table cell at dimension d.
SweepResult prop7_sweep(Prop7Region region, int d, std::size_t points, std::uint64_t seed,
                        const LensFn& lens);

/// u-interval of a table cell at angle theta intersected with the admissible
/// range u >= z_cut(theta)^d. Empty when first > second. The upper end may be
/// +infinity.
std::pair<double, double> prop7_u_range(Prop7Region region, double theta, int d);
/// Angular range of a table cell.
std::pair<double, double> prop7_theta_range(Prop7Region region, int d);

/// Rejection-sampling estimate of the lens ratio: uniform points in the box
/// around the z-ball, counting those outside the unit ball.
struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};
MonteCarloEstimate lens_monte_carlo(double z, double theta, int d, std::uint64_t samples,
                                    std::uint64_t seed);

struct VerifyOptions {
  bool quick = false;
  LensFn lens;  // empty: the library lens ratio
  unsigned workers = 1;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

std::vector<CheckResult> run_verify(const VerifyOptions& opts);

}  // namespace nntlab
