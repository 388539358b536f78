#include "nntlab/integrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace nntlab {

double Tolerance::target(double value) const noexcept {
  return std::max(abs, rel * std::abs(value));
}

namespace {

// QUADPACK qk15 abscissae and weights.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5 and the centre.
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  double roundoff = 0.0;

  bool operator<(const Panel& o) const noexcept { return error < o.error; }
};

Panel gk15(const std::function<Sample(double)>& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const Sample fc = f(centre);
  double kronrod = kWgk[7] * fc.value;
  double gauss = kWg[3] * fc.value;
  double nested = kWgk[7] * fc.error;
  double absolute = kWgk[7] * std::abs(fc.value);

  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const Sample lo = f(centre - dx);
    const Sample hi = f(centre + dx);
    const double sum = lo.value + hi.value;
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    nested += kWgk[j] * (lo.error + hi.error);
    absolute += kWgk[j] * (std::abs(lo.value) + std::abs(hi.value));
  }

  Panel p;
  p.a = a;
  p.b = b;
  p.value = kronrod * half;
  p.error = std::abs((kronrod - gauss) * half) + nested * std::abs(half);
  p.roundoff = 50.0 * std::numeric_limits<double>::epsilon() * absolute * std::abs(half);
  return p;
}

}  // namespace

QuadResult integrate_nested(const std::function<Sample(double)>& f, double a, double b,
                            const AdaptiveOptions& opts, std::span<const double> breaks) {
  if (!(opts.tol.abs >= 0.0 && opts.tol.rel >= 0.0) || (opts.tol.abs == 0.0 && opts.tol.rel == 0.0)) {
    throw std::invalid_argument("integrate: tolerance must be positive");
  }
  if (!(a <= b)) throw std::invalid_argument("integrate: require a <= b");
  QuadResult out;
  if (a == b) return out;

  std::vector<double> edges;
  edges.push_back(a);
  for (double x : breaks) {
    if (x > a && x < b) edges.push_back(x);
  }
  edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Panel> heap;
  std::vector<Panel> settled;  // at roundoff level or too narrow to split
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    heap.push(gk15(f, edges[i], edges[i + 1]));
    out.evaluations += 15;
  }

  auto totals = [&]() {
    double v = 0.0;
    double e = 0.0;
    double r = 0.0;
    auto copy = heap;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      r += copy.top().roundoff;
      copy.pop();
    }
    for (const Panel& p : settled) {
      v += p.value;
      e += p.error;
      r += p.roundoff;
    }
    return std::tuple{v, e, r};
  };

  auto [value, error, roundoff] = totals();
  std::uint64_t since_resum = 0;
  while (!heap.empty() && error > opts.tol.target(value)) {
    if (out.evaluations >= opts.max_evaluations) break;
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (worst.error <= worst.roundoff || !(mid > worst.a && mid < worst.b)) {
      settled.push_back(worst);
      continue;
    }
    const Panel left = gk15(f, worst.a, mid);
    const Panel right = gk15(f, mid, worst.b);
    out.evaluations += 30;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    roundoff += left.roundoff + right.roundoff - worst.roundoff;
    heap.push(left);
    heap.push(right);
    if (++since_resum == 64) {
      std::tie(value, error, roundoff) = totals();
      since_resum = 0;
    }
  }
  std::tie(value, error, roundoff) = totals();

  out.value = value;
  out.abs_error_estimate = error;
  out.converged = error <= opts.tol.target(value) || error <= roundoff;
  return out;
}

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const AdaptiveOptions& opts, std::span<const double> breaks) {
  return integrate_nested([&f](double x) { return Sample{f(x), 0.0}; }, a, b, opts, breaks);
}

GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double nn = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Newton iteration on P_n from the Tricomi initial guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nn + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = nn * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (n == 1) {
      rule.nodes[0] = 0.0;
      rule.weights[0] = 2.0;
      break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kk = static_cast<double>(k);
      const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
      p0 = p1;
      p1 = p2;
    }
    dp = nn * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

double integrate_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                                const GaussLegendreRule& rule, std::size_t panels) {
  if (panels == 0) throw std::invalid_argument("integrate_gauss_legendre: panels must be >= 1");
  const double width = (b - a) / static_cast<double>(panels);
  double total = 0.0;
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = a + width * static_cast<double>(p);
    const double centre = lo + 0.5 * width;
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      s += rule.weights[i] * f(centre + 0.5 * width * rule.nodes[i]);
    }
    total += 0.5 * width * s;
  }
  return total;
}

}  // namespace nntlab
