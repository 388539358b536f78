#include "nntlab/locallimit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "nntlab/nnt.hpp"
#include "nntlab/parallel.hpp"
#include "nntlab/rng.hpp"
#include "torus_grid.hpp"

namespace nntlab {

namespace {

constexpr double kMaxMeanCount = 2e8;

double expected_count(int d, double side) {
  if (d < 1) throw std::invalid_argument("poisson sample: d must be >= 1");
  if (!(side > 0.0) || std::isinf(side)) throw std::invalid_argument("poisson sample: L must be > 0");
  const double mean = std::pow(side, d);
  if (!(mean >= 10.0)) throw std::invalid_argument("poisson sample: L^d must be >= 10");
  if (mean > kMaxMeanCount) throw std::invalid_argument("poisson sample: L^d too large");
  return mean;
}

double torus_sq(const double* a, const double* b, std::size_t m) {
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double t = std::abs(a[k] - b[k]);
    t = std::min(t, 1.0 - t);
    s += t * t;
  }
  return s;
}

void link_nearest_older(PoissonSample& ps) {
  const std::size_t n = ps.size();
  const auto m = static_cast<std::size_t>(ps.d);
  ps.parent.assign(n, LabelledTree::kNoParent);
  if (n < 2) return;

  detail::TorusGrid grid(ps.d, n);
  const auto k = static_cast<std::ptrdiff_t>(grid.cells_per_axis());
  const double h = grid.cell_side();
  const double* flat = ps.coords.data();
  std::vector<std::ptrdiff_t> centre(m);
  for (std::size_t i = 0; i < n; ++i) {
    grid.coords_of(std::span<const double>(flat + i * m, m), centre);
    grid.insert(grid.flat_index(centre), static_cast<std::uint32_t>(i));
  }

  for (std::size_t v = 0; v < n; ++v) {
    const double* q = flat + v * m;
    grid.coords_of(std::span<const double>(q, m), centre);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_j = LabelledTree::kNoParent;
    auto visit = [&](const std::vector<std::uint32_t>& cell) {
      for (std::uint32_t j : cell) {
        if (!ps.older(j, v)) continue;
        const double s = torus_sq(flat + static_cast<std::size_t>(j) * m, q, m);
        // Exact distance ties are broken towards the older point.
        if (s < best || (s == best && ps.older(j, best_j))) {
          best = s;
          best_j = j;
        }
      }
    };
    for (std::ptrdiff_t r = 0;; ++r) {
      grid.visit_shell(centre, r, static_cast<std::uint32_t>(v), visit);
      if (2 * r + 1 >= k) break;
      const double reach = static_cast<double>(r) * h;
      if (best < reach * reach * (1.0 - 1e-12)) break;
    }
    ps.parent[v] = best_j;
  }
}

double replicate_mean(int d, double side, std::uint64_t seed, LocalMode mode) {
  if (mode == LocalMode::Geometric) {
    const PoissonSample ps = sample_poisson_nn(d, side, seed);
    if (ps.size() == 0) return 0.0;  // no points, no siblings
    return static_cast<double>(sibling_total(ps)) / static_cast<double>(ps.size());
  }
  SplitMix64 count_rng(derive_seed(seed, 0));
  const std::uint64_t n = poisson_variate(count_rng, expected_count(d, side));
  if (n == 0) return 0.0;
  std::vector<std::uint64_t> children(n, 0);
  SplitMix64 rng(derive_seed(seed, 1));
  for (std::uint64_t i = 1; i < n; ++i) ++children[rng.below(i)];
  std::uint64_t total = 0;
  for (std::uint64_t c : children) {
    if (c > 0) total += c * (c - 1);
  }
  return static_cast<double>(total) / static_cast<double>(n);
}

}  // namespace

PoissonSample sample_poisson_nn(int d, double side, std::uint64_t seed) {
  const double mean = expected_count(d, side);
  SplitMix64 count_rng(derive_seed(seed, 0));
  const std::uint64_t n = poisson_variate(count_rng, mean);

  PoissonSample ps;
  ps.d = d;
  ps.side = side;
  const auto m = static_cast<std::size_t>(d);
  ps.coords.resize(n * m);
  ps.labels.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    SplitMix64 rng(derive_seed(seed, i + 1));
    for (std::size_t a = 0; a < m; ++a) ps.coords[i * m + a] = rng.uniform();
    ps.labels[i] = rng.uniform();
  }
  link_nearest_older(ps);
  return ps;
}

std::uint64_t sibling_total(const PoissonSample& sample) {
  std::vector<std::uint64_t> children(sample.size(), 0);
  for (std::uint32_t p : sample.parent) {
    if (p != LabelledTree::kNoParent) ++children[p];
  }
  std::uint64_t total = 0;
  for (std::uint64_t c : children) {
    if (c > 0) total += c * (c - 1);
  }
  return total;
}

LocalEstimate estimate_S_local(int d, double side, std::size_t reps, std::uint64_t seed,
                               LocalMode mode, unsigned workers) {
  expected_count(d, side);
  if (reps == 0) throw std::invalid_argument("estimate_S_local: reps must be >= 1");
  std::vector<double> means(reps, 0.0);
  parallel_for(reps, workers, [&](std::size_t r) {
    means[r] = replicate_mean(d, side, derive_seed(seed, r), mode);
  });

  LocalEstimate est;
  est.reps = reps;
  est.mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(reps);
  if (reps > 1) {
    double ss = 0.0;
    for (double x : means) ss += (x - est.mean) * (x - est.mean);
    est.std_error = std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
  }
  // Point counts are cheap to recover from the count streams alone.
  const double mean_count = expected_count(d, side);
  for (std::size_t r = 0; r < reps; ++r) {
    SplitMix64 count_rng(derive_seed(derive_seed(seed, r), 0));
    est.total_points += poisson_variate(count_rng, mean_count);
  }
  return est;
}

}  // namespace nntlab
