#include "nntlab/geomvol.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nntlab/integrate.hpp"

namespace nntlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 100000; ++m) {
    const double mm = m;
    const double m2 = 2.0 * mm;
    double aa = mm * (b - mm) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + mm) * (qab + mm) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw std::runtime_error("incomplete_beta: continued fraction did not converge");
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double incomplete_beta_impl(double a, double b, double x, double y, double lbeta) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return 1.0;
  // Front factor x^a y^b / B(a, b), formed in log space.
  const double front = std::exp(a * std::log(x) + b * std::log(y) - lbeta);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, y) / b;
}

// (sin t / delta)^d * u * sin t with delta^2 given, in log space.
double sine_power_term(double u, double sin_t, double delta_sq, int d) {
  if (u == 0.0 || sin_t == 0.0) return 0.0;
  return std::exp(std::log(u) + (d + 1.0) * std::log(sin_t) - 0.5 * d * std::log(delta_sq));
}

double series_F(double x) {
  // sum_{k>=0} (-1)^k (k+1)/(k+2) x^k, Horner from the tail.
  constexpr int terms = 30;
  double s = 0.0;
  for (int k = terms; k >= 0; --k) {
    const double coef = static_cast<double>(k + 1) / static_cast<double>(k + 2);
    s = (k % 2 == 0 ? coef : -coef) + x * s;
  }
  return s;
}

}  // namespace

DimConstants dim_constants(int d) {
  if (d < 1) throw std::invalid_argument("dim_constants: d must be >= 1");
  DimConstants dc;
  dc.d = d;
  const double half = 0.5 * d;
  dc.log_V_d = half * std::log(kPi) - std::lgamma(half + 1.0);
  dc.log_ratio = std::lgamma(half + 1.0) - std::lgamma(half + 0.5) - 0.5 * std::log(kPi);
  dc.prefactor_6 = 2.0 * (d - 1) * std::exp(dc.log_ratio);
  dc.prefactor_8 = dc.prefactor_6 / d;
  dc.cap_a = 0.5 * (d + 1);
  dc.log_beta = log_beta(dc.cap_a, 0.5);
  return dc;
}

double incomplete_beta(double a, double b, double x, double y) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("incomplete_beta: a, b must be > 0");
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
    throw std::domain_error("incomplete_beta: x must lie in [0, 1]");
  }
  return incomplete_beta_impl(a, b, x, y, log_beta(a, b));
}

double incomplete_beta(double a, double b, double x) { return incomplete_beta(a, b, x, 1.0 - x); }

double cap_fraction(const DimConstants& dc, double h) {
  if (!(h >= -1.0 && h <= 1.0)) throw std::domain_error("cap_fraction: h must lie in [-1, 1]");
  if (h >= 0.0) {
    const double x = (1.0 - h) * (1.0 + h);
    return 0.5 * incomplete_beta_impl(dc.cap_a, 0.5, x, h * h, dc.log_beta);
  }
  const double x = h * h;
  return 0.5 + 0.5 * incomplete_beta_impl(0.5, dc.cap_a, x, (1.0 - h) * (1.0 + h), dc.log_beta);
}

double F(double x) {
  if (!(x >= 0.0)) throw std::domain_error("F: argument must be >= 0");
  if (x < 0.25) return series_F(x);
  if (std::isinf(x)) return 0.0;
  return (std::log1p(x) / x - 1.0 / (1.0 + x)) / x;
}

double G(double x) {
  if (!(x >= 0.0)) throw std::domain_error("G: argument must be >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return std::log1p(x) / x;
}

double z_cut(double theta) { return std::max(0.0, 2.0 * std::cos(theta)); }

double lens_ratio_unchecked(const DimConstants& dc, double z, double u, double cos_t,
                            double sin_t) {
  if (z == 0.0) return 0.0;
  // Two right triangles give the signed distances, in units of the ball
  // radius, from each centre to the radical hyperplane.
  const double a1 = 1.0 - z * cos_t;
  const double b1 = z * sin_t;
  const double a2 = cos_t - z;
  const double delta1 = std::hypot(a1, b1);
  const double delta2 = std::hypot(a2, sin_t);
  const double x1 = std::clamp(a1 / delta1, -1.0, 1.0);
  const double x2 = std::clamp(a2 / delta2, -1.0, 1.0);
  // z-ball volume beyond the hyperplane, minus the unit-ball cap inside it.
  const double lens = u * cap_fraction(dc, x2) - cap_fraction(dc, x1);
  return std::clamp(lens, std::max(0.0, u - 1.0), u);
}

namespace {

void check_lens_domain(double z, double theta, int d) {
  if (d < 2) throw std::domain_error("lens_ratio: d must be >= 2");
  if (!(theta >= 0.0 && theta <= kPi)) throw std::domain_error("lens_ratio: theta outside [0, pi]");
  if (!(z >= 0.0) || std::isinf(z)) throw std::domain_error("lens_ratio: z must be finite and >= 0");
  if (z < z_cut(theta) * (1.0 - 1e-12)) throw std::domain_error("lens_ratio: z below z_cut(theta)");
  if (std::hypot(1.0 - z * std::cos(theta), z * std::sin(theta)) == 0.0) {
    throw std::domain_error("lens_ratio: coincident centres");
  }
}

}  // namespace

double lens_ratio(const DimConstants& dc, double z, double theta) {
  check_lens_domain(z, theta, dc.d);
  return lens_ratio_unchecked(dc, z, std::pow(z, dc.d), std::cos(theta), std::sin(theta));
}

double lens_ratio(double z, double theta, int d) {
  check_lens_domain(z, theta, d);
  return lens_ratio(dim_constants(d), z, theta);
}

LensGeometry lens_geometry(double z, double theta, int d) {
  LensGeometry g;
  g.z = z;
  g.theta = theta;
  g.d = d;
  g.lens_ratio = lens_ratio(z, theta, d);
  g.delta = std::sqrt(1.0 + z * z - 2.0 * z * std::cos(theta));
  return g;
}

double lens_ratio_quadrature(double z, double theta, int d) {
  check_lens_domain(z, theta, d);
  if (d > 30) throw std::domain_error("lens_ratio_quadrature: d must be <= 30");
  static const GaussLegendreRule rule = gauss_legendre(20);
  constexpr std::size_t panels = 16;
  auto sin_power = [d](double phi) { return std::pow(std::sin(phi), d); };
  const double full = integrate_gauss_legendre(sin_power, 0.0, kPi, rule, panels);
  // With x = cos(phi) the cap integrand (1 - x^2)^{(d-1)/2} dx becomes
  // sin^d(phi) dphi, which is smooth at both ends.
  auto cap = [&](double h) {
    return integrate_gauss_legendre(sin_power, 0.0, std::acos(std::clamp(h, -1.0, 1.0)), rule,
                                    panels) /
           full;
  };
  const double c = std::cos(theta);
  const double delta = std::sqrt(1.0 + z * z - 2.0 * z * c);
  const double u = std::pow(z, d);
  const double lens = u * cap((c - z) / delta) - cap((1.0 - z * c) / delta);
  return std::clamp(lens, std::max(0.0, u - 1.0), u);
}

LensFn default_lens() {
  return [](double z, double theta, int d) { return lens_ratio(z, theta, d); };
}

double bound_slack(double u) { return 1e-12 * std::max(1.0, u); }

double c_theta(double theta) { return 1.0 / (std::cos(theta) + 0.01); }

double angle_a(int d) { return std::acos(std::pow(1.1, 1.0 / d) / 2.0); }

double angle_b() { return std::acos(0.05); }

bool lemma4_refined_applies(double z, double theta, int /*d*/) {
  if (theta >= kPi / 2) return true;
  return z >= 2.0 * std::cos(theta) && z <= c_theta(theta);
}

double lemma4_refined_bound(double z, double theta, int d) {
  const double u = std::pow(z, d);
  if (z == 0.0) return 0.0;
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double delta_sq = (1.0 - z * c) * (1.0 - z * c) + (z * s) * (z * s);
  const double k = std::numbers::sqrt2 / (kPi * std::sqrt(static_cast<double>(d)));
  const double shape = 1.0 / (1.0 / z - c) + 1.0 / (z - c);
  return u - k * sine_power_term(u, s, delta_sq, d) * shape;
}

bool check_lemma4(double z, double theta, int d, const LensFn& lens) {
  const double u = std::pow(z, d);
  const double value = lens(z, theta, d);
  const double slack = bound_slack(u);
  if (!(value >= std::max(0.0, u - 1.0) - slack)) return false;
  if (lemma4_refined_applies(z, theta, d)) {
    if (!(value >= lemma4_refined_bound(z, theta, d) - slack)) return false;
  }
  return true;
}

bool check_lemma4(double z, double theta, int d) { return check_lemma4(z, theta, d, default_lens()); }

bool check_lemma5(double u, double eps) {
  if (!(eps >= 0.0 && eps <= u)) throw std::domain_error("check_lemma5: require 0 <= eps <= u");
  const double diff = F(u - eps) - F(u);
  const double slack = bound_slack(u);
  if (!(diff <= 0.5 + slack)) return false;
  if (!(diff <= (2.0 / 3.0) * eps + slack)) return false;
  if (u >= 1.1 && eps <= 1.0) {
    const double lu = std::log(u);
    const double middle = 2.0 * lu / (u * (u - 1.0) * (u - 1.0)) * eps;
    if (!(diff <= middle + slack)) return false;
    if (!(middle <= 242.0 * lu / (u * u * u) * eps + slack)) return false;
  }
  return true;
}

const char* region_name(Prop7Region r) {
  switch (r) {
    case Prop7Region::HalfAcute: return "half_acute";
    case Prop7Region::NearAcute: return "near_acute";
    case Prop7Region::MidAcute: return "mid_acute";
    case Prop7Region::FarAcute: return "far_acute";
    case Prop7Region::HalfObtuse: return "half_obtuse";
    case Prop7Region::NearObtuse: return "near_obtuse";
    case Prop7Region::MidObtuse: return "mid_obtuse";
    case Prop7Region::FarObtuse: return "far_obtuse";
    case Prop7Region::SmallAngle: return "small_angle";
  }
  return "?";
}

std::vector<Prop7Region> prop7_regions(double u, double theta, int d) {
  std::vector<Prop7Region> out;
  const double small = std::pow(0.1, d);
  if (theta <= kPi / 4) out.push_back(Prop7Region::SmallAngle);
  if (theta >= kPi / 4 && theta <= kPi / 2) {
    const double near_lo = std::pow(std::max(0.1, 2.0 * std::cos(theta)), d);
    const double c_pow = std::pow(c_theta(theta), d);
    if (u <= small) out.push_back(Prop7Region::HalfAcute);
    if (u >= near_lo && u <= 1.1) out.push_back(Prop7Region::NearAcute);
    if (u >= 1.1 && u <= c_pow) out.push_back(Prop7Region::MidAcute);
    if (u >= c_pow) out.push_back(Prop7Region::FarAcute);
  }
  if (theta >= kPi / 2) {
    const double far = std::pow(10.0, d);
    if (u <= small) out.push_back(Prop7Region::HalfObtuse);
    if (u >= small && u <= 1.1) out.push_back(Prop7Region::NearObtuse);
    if (u >= 1.1 && u <= far) out.push_back(Prop7Region::MidObtuse);
    if (u >= far) out.push_back(Prop7Region::FarObtuse);
  }
  return out;
}

double prop7_bound(Prop7Region r, double u, double theta, int d) {
  const double k = std::numbers::sqrt2 / (kPi * std::sqrt(static_cast<double>(d)));
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double root = std::pow(u, 1.0 / d);
  switch (r) {
    case Prop7Region::HalfAcute:
    case Prop7Region::HalfObtuse:
      return 0.5;
    case Prop7Region::NearAcute:
      return 18.0 * k * sine_power_term(u, s, 1.0 + root * root - 2.0 * root * c, d);
    case Prop7Region::NearObtuse:
      return 8.0 * k * sine_power_term(u, s, 1.0 + root * root, d);
    case Prop7Region::MidAcute: {
      const double shaped = sine_power_term(u, s, 1.0 + root * root - 2.0 * root * c, d) / u;
      return 25168.0 * k * std::log(u) / (u * u) * shaped;
    }
    case Prop7Region::MidObtuse: {
      const double damp = std::exp(-0.5 * d * std::log1p(std::pow(1.1, 2.0 / d)));
      return 2662.0 * k * damp * std::log(u) / (u * u);
    }
    case Prop7Region::FarAcute:
    case Prop7Region::FarObtuse:
    case Prop7Region::SmallAngle:
      return F(std::max(0.0, u - 1.0)) - F(u);
  }
  return 0.0;
}

bool check_prop7(double u, double theta, int d, const LensFn& lens) {
  if (d < 2) throw std::domain_error("check_prop7: d must be >= 2");
  if (!(u >= 0.0) || std::isinf(u)) throw std::domain_error("check_prop7: u must be finite and >= 0");
  const double z = std::pow(u, 1.0 / d);
  if (z < z_cut(theta) * (1.0 - 1e-12)) throw std::domain_error("check_prop7: u below z_cut^d");
  const double gap = F(lens(z, theta, d)) - F(u);
  const double slack = bound_slack(u);
  for (Prop7Region r : prop7_regions(u, theta, d)) {
    if (!(gap <= prop7_bound(r, u, theta, d) + slack)) return false;
  }
  return true;
}

bool check_prop7(double u, double theta, int d) { return check_prop7(u, theta, d, default_lens()); }

}  // namespace nntlab
