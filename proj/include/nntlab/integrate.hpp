#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.
//
// Each panel's error is |K15 - G7| (the embedded lower-order rule) plus, for
// nested integrals, the Kronrod-weighted sum of the integrand's own error
// estimates. Panel errors are summed in absolute value, so the reported
// estimate is conservative. The worst panel is bisected until the total
// meets the tolerance or the evaluation budget is exhausted.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace nntlab {

struct QuadResult {
  double value = 0.0;
  /// Total error estimate, truncation_bound included.
  double abs_error_estimate = 0.0;
  std::uint64_t evaluations = 0;
  /// Bound on any discarded infinite tail (part of abs_error_estimate).
  double truncation_bound = 0.0;
  bool converged = true;
};

/// Accept when error <= max(abs, rel * |value|).
struct Tolerance {
  double abs = 0.0;
  double rel = 0.0;

  double target(double value) const noexcept;
};

/// Integrand value together with its own absolute error (0 for exact values).
struct Sample {
  double value = 0.0;
  double error = 0.0;
};

struct AdaptiveOptions {
  Tolerance tol{1e-10, 0.0};
  std::uint64_t max_evaluations = 4'000'000;
};

/// Integral of f over [a, b]; `breaks` are extra initial panel boundaries
/// strictly inside (a, b).
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const AdaptiveOptions& opts, std::span<const double> breaks = {});

/// As above for an integrand that is itself an approximation.
QuadResult integrate_nested(const std::function<Sample(double)>& f, double a, double b,
                            const AdaptiveOptions& opts, std::span<const double> breaks = {});

/// n-point Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussLegendreRule gauss_legendre(std::size_t n);

/// Fixed composite Gauss-Legendre rule over `panels` equal panels.
double integrate_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                const GaussLegendreRule& rule, std::size_t panels);

}  // namespace nntlab
