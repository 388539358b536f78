#pragma once

// Numerical evaluation of the limiting mean sibling count S_d and of its
// decomposition S_d = 2 - T_plus(d) + T_minus(d).
//
// The double integrals run over theta in [0, pi] (outer) and u = z^d
// (inner). Inner integrals are computed in t = ln(1 + u) so the long tail
// is covered by a few panels; beyond a cut-off U the tail is replaced by an
// exact integral of a lower bound and the gap is reported as
// truncation_bound.

#include <span>
#include <string>
#include <vector>

#include "nntlab/geomvol.hpp"
#include "nntlab/integrate.hpp"

namespace nntlab {

enum class SdKernel {
  Lens,      // F(lens ratio) from u = z_cut(theta)^d
  Identity,  // F(u) over u >= 0; integrates to exactly 2
};

/// S_d by direct double quadrature. Requires d >= 2 and tol > 0.
/// Throws std::runtime_error if the evaluation budget runs out.
QuadResult s_d_direct(int d, double tol);
QuadResult s_d_direct(int d, double tol, SdKernel kernel);
QuadResult s_d_direct(int d, double tol, const LensFn& lens);

QuadResult t_plus(int d, double tol);
QuadResult t_plus(int d, Tolerance tol);

QuadResult t_minus(int d, double tol);
QuadResult t_minus(int d, Tolerance tol);

/// Leading-order asymptotic (2 sqrt(2 pi)/3) d^{-1/2} (sqrt(3)/2)^d.
double t_plus_asymptotic(int d);

/// The two one-dimensional constants governing T_plus's asymptotics.
QuadResult lemma6_first(double tol);   // -> (pi sqrt3 - 3)/8
QuadResult lemma6_second(double tol);  // -> (pi sqrt3 + 3)/8

enum class S1Terms { Both, First, Second };

/// Outer integral of the one-dimensional sibling constant with the inner two
/// integrals done in closed form. Both -> 1 + ln 2; First -> 2;
/// Second -> 1 - ln 2.
QuadResult s1_reduced_integral(double tol, S1Terms terms = S1Terms::Both);

/// Integral of 1 - ln x over [0, 1] (the random recursive tree limit, 2).
double s_infinity_reduced_integral();

struct SdRow {
  int d = 0;
  QuadResult s_d;
  QuadResult t_plus;
  QuadResult t_minus;
  double seconds = 0.0;

  double err() const noexcept { return s_d.abs_error_estimate; }
  std::uint64_t evaluations() const noexcept {
    return s_d.evaluations + t_plus.evaluations + t_minus.evaluations;
  }
  /// |S_d - (2 - T_plus + T_minus)| minus the summed error estimates (<= 0 is consistent).
  double decomposition_excess() const noexcept;
};

/// Rows in the order of d_list. Each d is an independent work item.
std::vector<SdRow> sd_table(std::span<const int> d_list, double tol, unsigned workers = 1);

/// One-line description of whether S_d increases along the table.
std::string monotone_trend(std::span<const SdRow> rows);

}  // namespace nntlab
