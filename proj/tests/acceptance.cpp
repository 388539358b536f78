// End-to-end acceptance run. One PASS/FAIL line per criterion; exit status is
// nonzero if any criterion fails. All tolerances are fixed here.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "nntlab/geomvol.hpp"
#include "nntlab/locallimit.hpp"
#include "nntlab/nnt.hpp"
#include "nntlab/parallel.hpp"
#include "nntlab/quadrature.hpp"
#include "nntlab/rng.hpp"
#include "nntlab/simulate.hpp"
#include "nntlab/stats.hpp"
#include "nntlab/verify.hpp"

using namespace nntlab;

namespace {

constexpr std::uint64_t kSeed = 20240601;

struct Outcome {
  bool passed = false;
  std::ostringstream detail;
};

using Body = std::function<void(Outcome&)>;

const double kLn2 = std::log(2.0);
const unsigned kWorkers = resolve_workers(0);

bool within_sigma(double est, double target, double se, double k = 3.0) {
  return std::abs(est - target) <= k * se;
}

void theorem1_circle(Outcome& o) {
  const double target = 1.0 + kLn2;
  const SimulationSummary sim = simulate(Space::sphere(1), 50000, 16, kSeed, kWorkers);
  const LocalEstimate loc = estimate_S_local(1, 10000.0, 50, kSeed, LocalMode::Geometric, kWorkers);
  const bool a = sim.identity_holds && within_sigma(sim.mean_siblings, target, sim.std_error) &&
                 std::abs(sim.mean_siblings - 1.6931) <= 0.02;
  const bool b = within_sigma(loc.mean, target, loc.std_error) && std::abs(loc.mean - 1.6931) <= 0.02;
  o.passed = a && b;
  o.detail << "circle n=5e4 " << sim.mean_siblings << " +- " << sim.std_error << "; window L=1e4 "
           << loc.mean << " +- " << loc.std_error << "; target " << target;
}

// Exact E[S] for the random recursive tree on n nodes: the child count of
// node j is a sum of independent Bernoulli(1/(i-1)), i = j+1..n.
double rrt_finite_mean(std::size_t n) {
  std::vector<double> h(n + 1, 0.0), q(n + 1, 0.0);
  for (std::size_t k = 1; k <= n; ++k) {
    h[k] = h[k - 1] + 1.0 / double(k);
    q[k] = q[k - 1] + 1.0 / (double(k) * double(k));
  }
  double total = 0.0;
  for (std::size_t j = 1; j <= n; ++j) {
    const double m = h[n - 1] - h[j - 1];
    total += m * m - (q[n - 1] - q[j - 1]);
  }
  return total / double(n);
}

void theorem1_rrt(Outcome& o) {
  const SimulationSummary sim = simulate(Space::rrt(), 2000, 500, kSeed, kWorkers);
  o.passed = sim.identity_holds && within_sigma(sim.mean_siblings, 2.0, sim.std_error);
  const double finite = rrt_finite_mean(2000);
  o.detail << sim.mean_siblings << " +- " << sim.std_error << " vs 2 (" << (sim.mean_siblings - 2.0) / sim.std_error
           << " sigma); exact mean at n=2000 is " << finite << " (" << (sim.mean_siblings - finite) / sim.std_error
           << " sigma)";
}

void reduced_integrals(Outcome& o) {
  const double s_inf = s_infinity_reduced_integral();
  const double s1 = s1_reduced_integral(1e-10).value;
  o.passed = std::abs(s_inf - 2.0) <= 1e-10 && std::abs(s1 - (1.0 + kLn2)) <= 1e-8;
  o.detail.precision(16);
  o.detail << "S_inf " << s_inf << ", S_1 " << s1;
}

void normalization(Outcome& o) {
  double worst = 0.0;
  for (int d = 2; d <= 12; ++d) {
    worst = std::max(worst, std::abs(s_d_direct(d, 1e-9, SdKernel::Identity).value - 2.0));
  }
  o.passed = worst <= 1e-8;
  o.detail << "max |value - 2| = " << worst;
}

void decomposition(Outcome& o) {
  std::vector<int> ds;
  for (int d = 2; d <= 10; ++d) ds.push_back(d);
  const auto rows = sd_table(ds, 1e-9, kWorkers);
  double worst = -1e300;
  bool ok = true;
  for (const auto& row : rows) {
    worst = std::max(worst, row.decomposition_excess());
    ok = ok && row.decomposition_excess() <= 0.0;
  }
  o.passed = ok;
  o.detail << "max(|S - (2 - T+ + T-)| - errors) = " << worst;
}

void mc_vs_quadrature(Outcome& o) {
  bool ok = true;
  o.detail.precision(7);
  for (int d : {2, 3}) {
    const double target = s_d_direct(d, 1e-9).value;
    const SimulationSummary sim = simulate(Space::torus(d), 100000, 8, derive_seed(kSeed, d), kWorkers);
    const double side = d == 2 ? 300.0 : 45.0;
    const LocalEstimate loc =
        estimate_S_local(d, side, 30, derive_seed(kSeed, 100 + d), LocalMode::Geometric, kWorkers);
    ok = ok && sim.identity_holds && within_sigma(sim.mean_siblings, target, sim.std_error) &&
         within_sigma(loc.mean, target, loc.std_error);
    o.detail << "d=" << d << " S=" << target << " torus " << sim.mean_siblings << "+-" << sim.std_error
             << " window " << loc.mean << "+-" << loc.std_error << "; ";
  }
  o.passed = ok;
}

void t_plus_asymptotics(Outcome& o) {
  double prev_gap = 1e300;
  bool approaching = true;
  double last = 0.0;
  for (int d : {25, 50, 100, 200}) {
    last = t_plus(d, Tolerance{0.0, 1e-10}).value / t_plus_asymptotic(d);
    const double gap = std::abs(last - 1.0);
    approaching = approaching && gap < prev_gap;
    prev_gap = gap;
    o.detail << "d=" << d << ": " << last << " ";
  }
  o.passed = approaching && last >= 0.95 && last <= 1.05;
}

void t_minus_decay(Outcome& o) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  int count = 0;
  bool nonneg = true;
  for (int d = 2; d <= 20; ++d) {
    const double tm = t_minus(d, Tolerance{0.0, 1e-7}).value;
    nonneg = nonneg && tm >= 0.0;
    if (d < 6) continue;
    const double y = std::log(tm);
    sx += d;
    sy += y;
    sxx += double(d) * d;
    sxy += d * y;
    ++count;
  }
  const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  const double limit = std::log(4.0 * std::sqrt(3.0) / 9.0) + 0.02;
  o.passed = nonneg && slope <= limit;
  o.detail << "fitted slope " << slope << " vs limit " << limit;
}

void lemma6(Outcome& o) {
  const double s3 = std::sqrt(3.0);
  const double a = lemma6_first(1e-12).value;
  const double b = lemma6_second(1e-12).value;
  const double ea = std::abs(a - (std::numbers::pi * s3 - 3.0) / 8.0);
  const double eb = std::abs(b - (std::numbers::pi * s3 + 3.0) / 8.0);
  o.passed = ea <= 1e-10 && eb <= 1e-10;
  o.detail << "errors " << ea << ", " << eb;
}

void report_sweep(Outcome& o, const SweepResult& s) {
  o.passed = s.passed();
  o.detail << s.points << " points, " << s.failures << " failures";
  if (!s.first_failure.empty()) o.detail << "; first: " << s.first_failure;
}

void lemma4(Outcome& o) { report_sweep(o, lemma4_sweep(10000, kSeed, default_lens())); }

void lemma5(Outcome& o) { report_sweep(o, lemma5_sweep(100000, kSeed)); }

void prop7(Outcome& o) {
  bool ok = true;
  std::size_t points = 0;
  std::size_t failures = 0;
  for (int d : {2, 5, 10, 20}) {
    for (int r = 0; r < kProp7RegionCount; ++r) {
      const auto region = static_cast<Prop7Region>(r);
      const SweepResult s = prop7_sweep(region, d, 10000, derive_seed(kSeed, 1000 * d + r), default_lens());
      points += s.points;
      failures += s.failures;
      if (!s.passed()) {
        ok = false;
        o.detail << "[" << region_name(region) << " d=" << d << ": " << s.failures << "/" << s.points;
        if (!s.first_failure.empty()) o.detail << ", first " << s.first_failure;
        o.detail << "] ";
      }
    }
  }
  o.passed = ok;
  o.detail << points << " points, " << failures << " failures";
}

void lens_oracle(Outcome& o) {
  SplitMix64 rng(derive_seed(kSeed, 13));
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const int d = 2 + static_cast<int>(rng.below(5));
    const double theta = std::numbers::pi * rng.uniform();
    const double z = z_cut(theta) + 0.05 + 1.5 * rng.uniform();
    const MonteCarloEstimate mc = lens_monte_carlo(z, theta, d, 10'000'000, derive_seed(kSeed, 200 + i));
    worst = std::max(worst, std::abs(lens_ratio(z, theta, d) - mc.estimate) / mc.std_error);
  }
  o.passed = worst <= 3.0;
  o.detail << "max deviation " << worst << " standard errors over 20 triples";
}

void exact_identities(Outcome& o) {
  bool identity = true;
  std::size_t trees = 0;
  for (const Space& space : {Space::sphere(1), Space::sphere(2), Space::torus(1), Space::torus(2),
                             Space::torus(3), Space::rrt()}) {
    const SimulationSummary sim = simulate(space, 1000, 50, derive_seed(kSeed, trees + 7), kWorkers);
    identity = identity && sim.identity_holds;
    trees += sim.rows.size();
  }

  const int reps = 10000;
  double s = 0.0, ss = 0.0;
  for (int r = 0; r < reps; ++r) {
    const ReplicateRow row = simulate_replicate(Space::rrt(), 100, derive_seed(kSeed ^ 0x5254ULL, r));
    identity = identity && row.identity_holds;
    const double k = static_cast<double>(row.stats.root_degree);
    s += k;
    ss += k * k;
  }
  const double mean = s / reps;
  const double sd = std::sqrt((ss / reps - mean * mean) * reps / (reps - 1));
  const double h = harmonic_number(99);
  const bool root_ok = within_sigma(mean, h, sd / std::sqrt(double(reps)));

  std::vector<double> circle, recursive;
  for (int r = 0; r < reps; ++r) {
    const ReplicateRow a = simulate_replicate(Space::sphere(1), 200, derive_seed(kSeed ^ 0x4b53ULL, r));
    const ReplicateRow b = simulate_replicate(Space::rrt(), 200, derive_seed(kSeed ^ 0x4b54ULL, r));
    identity = identity && a.identity_holds && b.identity_holds;
    circle.push_back(static_cast<double>(a.stats.depth_last));
    recursive.push_back(static_cast<double>(b.stats.depth_last));
  }
  const double ks = ks_statistic(circle, recursive);
  const double crit = ks_critical_1pct(circle.size(), recursive.size());
  trees += 3 * reps;

  o.passed = identity && root_ok && ks < crit;
  o.detail << "identity on " << trees << " trees: " << (identity ? "ok" : "VIOLATED") << "; root degree "
           << mean << " vs H_99 " << h << "; KS " << ks << " < " << crit;
}

void builder_equivalence(Outcome& o) {
  bool ok = true;
  std::size_t instances = 0;
  for (const Space& space : {Space::sphere(1), Space::sphere(2), Space::sphere(3), Space::torus(1),
                             Space::torus(2), Space::torus(3), Space::rrt()}) {
    for (std::uint64_t r = 0; r < 100; ++r) {
      const std::uint64_t seed = derive_seed(kSeed + 15, instances);
      const PointSet pts = sample_points(space, 2000, derive_seed(seed, 0));
      const std::uint64_t ties = derive_seed(seed, 1);
      ok = ok && build_nnt(space, pts, ties) == build_nnt_accelerated(space, pts, ties);
      ++instances;
    }
  }
  o.passed = ok;
  o.detail << instances << " instances at n=2000";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Body>> criteria = {
      {"circle and window estimates reach 1 + ln 2", theorem1_circle},
      {"random recursive tree reaches 2", theorem1_rrt},
      {"reduced integrals", reduced_integrals},
      {"normalization identity", normalization},
      {"decomposition consistency", decomposition},
      {"simulation agrees with quadrature", mc_vs_quadrature},
      {"positive part asymptotics", t_plus_asymptotics},
      {"negative part decay rate", t_minus_decay},
      {"asymptotic constants", lemma6},
      {"lens lower bounds sweep", lemma4},
      {"kernel difference sweep", lemma5},
      {"region bounds sweep", prop7},
      {"lens hit-test oracle", lens_oracle},
      {"exact tree identities", exact_identities},
      {"builder equivalence", builder_equivalence},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failed += !o.passed;
    std::printf("%-4s %2zu  %-44s %8.1fs  %s\n", o.passed ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
