#pragma once

// Unit-ball volumes, the sibling kernel F and the lens ratio.
//
// The lens is the part of a ball of radius z that lies outside the unit ball
// when the two centres sit at distance delta = sqrt(1 + z^2 - 2 z cos(theta)).
// lens_ratio() returns its volume divided by V_d, computed from two
// spherical-cap fractions, each a regularized incomplete beta function with
// parameters ((d+1)/2, 1/2).

#include <functional>
#include <vector>

namespace nntlab {

struct DimConstants {
  int d = 0;
  double log_V_d = 0.0;      // log of pi^{d/2} / Gamma(d/2 + 1)
  double log_ratio = 0.0;    // log of V_{d-1} / V_d
  double prefactor_6 = 0.0;  // 2 (d-1) V_{d-1} / V_d
  double prefactor_8 = 0.0;  // 2 (d-1) V_{d-1} / (d V_d)
  double cap_a = 0.0;        // (d+1)/2
  double log_beta = 0.0;     // log B((d+1)/2, 1/2)
};

/// Requires d >= 1.
DimConstants dim_constants(int d);

/// Regularized incomplete beta I_x(a, b); y must equal 1 - x (passed
/// separately so callers can supply it without cancellation).
double incomplete_beta(double a, double b, double x, double y);
double incomplete_beta(double a, double b, double x);

/// Fraction of the unit d-ball whose first coordinate is >= h, h in [-1, 1].
double cap_fraction(const DimConstants& dc, double h);

/// (1/x) (ln(1+x)/x - 1/(1+x)), with F(0) = 1/2. Throws on x < 0.
double F(double x);
/// ln(1+x)/x with G(0) = 1; G' = -F so the integral of F over [a, b] is G(a) - G(b).
double G(double x);

/// max(0, 2 cos theta): smallest admissible radius ratio at angle theta.
double z_cut(double theta);

struct LensGeometry {
  double z = 0.0;
  double theta = 0.0;
  int d = 0;
  double delta = 0.0;
  double lens_ratio = 0.0;
};

/// Lens volume over V_d. Requires d >= 2, theta in [0, pi] and
/// z >= z_cut(theta); otherwise std::domain_error.
double lens_ratio(double z, double theta, int d);
double lens_ratio(const DimConstants& dc, double z, double theta);
LensGeometry lens_geometry(double z, double theta, int d);

/// Unchecked kernel: u = z^d, cos/sin of theta precomputed.
double lens_ratio_unchecked(const DimConstants& dc, double z, double u, double cos_t,
                            double sin_t);

/// Same quantity with both cap fractions integrated by composite
/// Gauss-Legendre in the angular variable. Cross-check only, d <= 30.
double lens_ratio_quadrature(double z, double theta, int d);

/// Lens function signature, replaceable for fault injection.
using LensFn = std::function<double(double z, double theta, int d)>;

/// Default LensFn wrapping lens_ratio.
LensFn default_lens();

/// Absolute slack used by every bound check below.
double bound_slack(double u);

/// C(theta) = 1 / (cos(theta) + 0.01).
double c_theta(double theta);
/// arccos(1.1^{1/d} / 2).
double angle_a(int d);
/// arccos(0.05).
double angle_b();

/// Lower bounds on the lens ratio: always >= max(0, u - 1); in the refined
/// region also the explicit sine-power bound.
bool check_lemma4(double z, double theta, int d);
bool check_lemma4(double z, double theta, int d, const LensFn& lens);
/// True when the refined (second) lens bound applies at (z, theta).
bool lemma4_refined_applies(double z, double theta, int d);
/// The refined lower bound itself.
double lemma4_refined_bound(double z, double theta, int d);

/// Upper bounds on F(u - eps) - F(u) for 0 <= eps <= u.
bool check_lemma5(double u, double eps);

enum class Prop7Region {
  HalfAcute,   // theta in [pi/4, pi/2], u <= 0.1^d
  NearAcute,   // theta in [pi/4, pi/2], u in [max(0.1, 2cos)^d, 1.1]
  MidAcute,    // theta in [pi/4, pi/2], u in [1.1, C^d]
  FarAcute,    // theta in [pi/4, pi/2], u >= C^d
  HalfObtuse,  // theta in [pi/2, pi], u <= 0.1^d
  NearObtuse,  // theta in [pi/2, pi], u in [0.1^d, 1.1]
  MidObtuse,   // theta in [pi/2, pi], u in [1.1, 10^d]
  FarObtuse,   // theta in [pi/2, pi], u >= 10^d
  SmallAngle,  // theta in [0, pi/4]
};
inline constexpr int kProp7RegionCount = 9;

const char* region_name(Prop7Region r);

/// Every table cell containing (u, theta); cells are closed so boundary
/// points belong to several.
std::vector<Prop7Region> prop7_regions(double u, double theta, int d);
/// Tabulated upper bound on F(lens) - F(u) for the given cell.
double prop7_bound(Prop7Region r, double u, double theta, int d);

/// Checks F(lens(u^{1/d}, theta)) - F(u) against the bound of every cell
/// containing (u, theta). Requires u >= z_cut(theta)^d.
bool check_prop7(double u, double theta, int d);
bool check_prop7(double u, double theta, int d, const LensFn& lens);

}  // namespace nntlab
