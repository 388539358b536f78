#include "nntlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "nntlab/parallel.hpp"

namespace nntlab {

namespace {

constexpr double kPi = std::numbers::pi;

enum class Mode { Lens, Identity, Difference };

void require_d(int d, const char* what) {
  if (d < 2) throw std::invalid_argument(std::string(what) + ": d must be >= 2");
}

void require_tol(double tol, const char* what) {
  if (!(tol > 0.0)) throw std::invalid_argument(std::string(what) + ": tol must be > 0");
}

// 1 - ln(1+w)/w without cancellation at small w.
double one_minus_G(double w) {
  if (w < 0.25) {
    double s = 0.0;
    for (int k = 30; k >= 1; --k) {
      const double coef = 1.0 / static_cast<double>(k + 1);
      s = (k % 2 == 1 ? coef : -coef) + w * s;
    }
    return w * s;
  }
  return 1.0 - G(w);
}

// Cut-off U with 2 (G(U-1) - G(U)) <= budget. The factor 2 is the total
// theta weight prefactor_8 * integral of sin^{d-2}.
double tail_cutoff(double budget) {
  double u = 16.0;
  while (2.0 * (G(u - 1.0) - G(u)) > budget && u < 1e300) u *= 2.0;
  return u;
}

QuadResult theta_integral(int d, double tol, Mode mode, const LensFn* custom) {
  const DimConstants dc = dim_constants(d);
  const double cutoff = tail_cutoff(tol / 10.0);
  const double trunc = mode == Mode::Identity ? 0.0 : 2.0 * (G(cutoff - 1.0) - G(cutoff));

  AdaptiveOptions inner_opts;
  inner_opts.tol = Tolerance{0.15 * tol, 0.0};
  inner_opts.max_evaluations = 400'000;
  AdaptiveOptions outer_opts;
  outer_opts.tol = Tolerance{0.9 * tol - trunc, 0.0};
  outer_opts.max_evaluations = 20'000;

  std::uint64_t inner_evals = 0;
  auto outer = [&](double theta) -> Sample {
    const double s = std::sin(theta);
    const double c = std::cos(theta);
    const double weight = d == 2 ? dc.prefactor_8 : dc.prefactor_8 * std::pow(s, d - 2);
    if (weight == 0.0) return {0.0, 0.0};
    const double lo = mode == Mode::Identity ? 0.0 : std::pow(std::max(0.0, 2.0 * c), d);
    const double hi = std::max(cutoff, lo);

    auto inner = [&](double t) {
      const double u = std::expm1(t);
      const double z = std::pow(u, 1.0 / d);
      double h = 0.0;
      if (mode == Mode::Identity) {
        h = F(u);
      } else {
        const double lens =
            custom ? (*custom)(z, theta, d) : lens_ratio_unchecked(dc, z, u, c, s);
        h = mode == Mode::Lens ? F(lens) : F(lens) - F(u);
      }
      return h * (1.0 + u);
    };
    const QuadResult r = integrate(inner, std::log1p(lo), std::log1p(hi), inner_opts);
    inner_evals += r.evaluations;
    if (!r.converged) throw std::runtime_error("inner quadrature did not converge");
    const double tail = mode == Mode::Difference ? 0.0 : G(hi);
    return {weight * (r.value + tail), weight * r.abs_error_estimate};
  };

  const std::array<double, 4> breaks{kPi / 4, kPi / 3, kPi / 2, 2 * kPi / 3};
  QuadResult out = integrate_nested(outer, 0.0, kPi, outer_opts, breaks);
  if (!out.converged) throw std::runtime_error("outer quadrature did not converge");
  out.evaluations += inner_evals;
  out.truncation_bound = trunc;
  out.abs_error_estimate += trunc;
  return out;
}

}  // namespace

QuadResult s_d_direct(int d, double tol, SdKernel kernel) {
  require_d(d, "s_d_direct");
  require_tol(tol, "s_d_direct");
  return theta_integral(d, tol, kernel == SdKernel::Lens ? Mode::Lens : Mode::Identity, nullptr);
}

QuadResult s_d_direct(int d, double tol) { return s_d_direct(d, tol, SdKernel::Lens); }

QuadResult s_d_direct(int d, double tol, const LensFn& lens) {
  require_d(d, "s_d_direct");
  require_tol(tol, "s_d_direct");
  return theta_integral(d, tol, Mode::Lens, &lens);
}

QuadResult t_minus(int d, double tol) {
  require_d(d, "t_minus");
  require_tol(tol, "t_minus");
  return theta_integral(d, tol, Mode::Difference, nullptr);
}

QuadResult t_minus(int d, Tolerance tol) {
  if (tol.rel > 0.0) {
    // Bootstrap the scale with a coarse pass, then refine absolutely.
    const QuadResult coarse = t_minus(d, std::max(tol.abs, 1e-6));
    const double target = std::max(tol.abs, tol.rel * std::abs(coarse.value));
    if (target > 0.0) return t_minus(d, target);
  }
  return t_minus(d, tol.abs);
}

QuadResult t_plus(int d, Tolerance tol) {
  require_d(d, "t_plus");
  if (!(tol.abs >= 0.0 && tol.rel >= 0.0) || (tol.abs == 0.0 && tol.rel == 0.0)) {
    throw std::invalid_argument("t_plus: tolerance must be positive");
  }
  const DimConstants dc = dim_constants(d);
  // z = sin(phi) removes the (1 - z^2)^{-1/2} endpoint behaviour at d = 2.
  auto integrand = [&](double phi) {
    const double s = std::sin(phi);
    if (s == 0.0) return 0.0;
    const double w = std::exp(d * std::log(2.0 * s));
    const double weight = d == 2 ? 1.0 : std::pow(std::cos(phi), d - 2);
    return dc.prefactor_8 * weight * one_minus_G(w);
  };
  AdaptiveOptions opts;
  opts.tol = tol;
  const std::array<double, 3> breaks{kPi / 6, kPi / 4, kPi / 3};
  QuadResult r = integrate(integrand, 0.0, kPi / 2, opts, breaks);
  if (!r.converged) throw std::runtime_error("t_plus: quadrature did not converge");
  return r;
}

QuadResult t_plus(int d, double tol) {
  require_tol(tol, "t_plus");
  return t_plus(d, Tolerance{tol, 0.0});
}

double t_plus_asymptotic(int d) {
  const double dd = d;
  return 2.0 * std::sqrt(2.0 * kPi) / 3.0 / std::sqrt(dd) *
         std::exp(dd * std::log(std::sqrt(3.0) / 2.0));
}

QuadResult lemma6_first(double tol) {
  require_tol(tol, "lemma6_first");
  auto f = [](double y) { return 1.5 * one_minus_G(y * y * y) / (y * y); };
  AdaptiveOptions opts;
  opts.tol = Tolerance{tol, 0.0};
  return integrate(f, 0.0, 1.0, opts);
}

QuadResult lemma6_second(double tol) {
  require_tol(tol, "lemma6_second");
  auto f = [](double y) {
    const double y3 = y * y * y;
    return 1.5 * (1.0 + 3.0 * y3 * std::log(y) - y3 * std::log1p(y3));
  };
  AdaptiveOptions opts;
  opts.tol = Tolerance{tol, 0.0};
  return integrate(f, 0.0, 1.0, opts);
}

QuadResult s1_reduced_integral(double tol, S1Terms terms) {
  require_tol(tol, "s1_reduced_integral");
  // For outer variable x, the v and u2 integrals over 0 < v < u2 < x:
  //   of 2/u2:       2x ln x - 2x (ln x - 1)
  //   of 1/(x + u2): x ln(2x) - (2x ln(2x) - x ln x - x)
  auto first = [](double x) { return (2.0 * x * std::log(x) - 2.0 * x * (std::log(x) - 1.0)) / x; };
  auto second = [](double x) {
    const double l2x = std::log(2.0 * x);
    return (x * l2x - (2.0 * x * l2x - x * std::log(x) - x)) / x;
  };
  auto f = [&](double x) {
    switch (terms) {
      case S1Terms::First: return first(x);
      case S1Terms::Second: return second(x);
      case S1Terms::Both: break;
    }
    return first(x) - second(x);
  };
  AdaptiveOptions opts;
  opts.tol = Tolerance{tol, 0.0};
  QuadResult r = integrate(f, 0.0, 1.0, opts);
  if (!r.converged) throw std::runtime_error("s1_reduced_integral: quadrature did not converge");
  return r;
}

double s_infinity_reduced_integral() {
  AdaptiveOptions opts;
  opts.tol = Tolerance{1e-14, 0.0};
  const QuadResult r = integrate([](double x) { return 1.0 - std::log(x); }, 0.0, 1.0, opts);
  if (!r.converged) throw std::runtime_error("s_infinity_reduced_integral: quadrature did not converge");
  return r.value;
}

double SdRow::decomposition_excess() const noexcept {
  const double gap = std::abs(s_d.value - (2.0 - t_plus.value + t_minus.value));
  return gap - (s_d.abs_error_estimate + t_plus.abs_error_estimate + t_minus.abs_error_estimate);
}

std::vector<SdRow> sd_table(std::span<const int> d_list, double tol, unsigned workers) {
  require_tol(tol, "sd_table");
  for (int d : d_list) require_d(d, "sd_table");
  std::vector<SdRow> rows(d_list.size());
  parallel_for(d_list.size(), workers, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    SdRow row;
    row.d = d_list[i];
    row.s_d = s_d_direct(row.d, tol);
    row.t_plus = t_plus(row.d, tol);
    row.t_minus = t_minus(row.d, tol);
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    rows[i] = row;
  });
  return rows;
}

std::string monotone_trend(std::span<const SdRow> rows) {
  std::vector<SdRow> sorted(rows.begin(), rows.end());
  std::sort(sorted.begin(), sorted.end(), [](const SdRow& a, const SdRow& b) { return a.d < b.d; });
  std::ostringstream os;
  if (sorted.size() < 2) {
    os << "trend: fewer than two dimensions";
    return os.str();
  }
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (!(sorted[i].s_d.value > sorted[i - 1].s_d.value)) {
      os << "trend: not increasing (S_" << sorted[i].d << " <= S_" << sorted[i - 1].d << ")";
      return os.str();
    }
  }
  os << "trend: increasing over d = " << sorted.front().d << ".." << sorted.back().d;
  return os.str();
}

}  // namespace nntlab
