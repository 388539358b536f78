#include "nntlab/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "nntlab/parallel.hpp"
#include "nntlab/rng.hpp"

namespace nntlab {

ReplicateRow simulate_replicate(const Space& space, std::size_t n, std::uint64_t seed) {
  const PointSet points = sample_points(space, n, derive_seed(seed, 0));
  const LabelledTree tree = build_nnt_accelerated(space, points, derive_seed(seed, 1));
  ReplicateRow row;
  row.seed = seed;
  row.stats = tree_stats(tree);
  row.identity_holds = row.stats.sq_degree_sum + 2 * row.stats.root_degree ==
                       row.stats.sibling_sum + 4 * (row.stats.n - 1);
  return row;
}

SimulationSummary simulate(const Space& space, std::size_t n, std::size_t reps,
                           std::uint64_t base_seed, unsigned workers) {
  if (n < 2) throw std::invalid_argument("simulate: n must be >= 2");
  if (reps == 0) throw std::invalid_argument("simulate: reps must be >= 1");
  SimulationSummary out;
  out.rows.resize(reps);
  parallel_for(reps, workers, [&](std::size_t r) {
    out.rows[r] = simulate_replicate(space, n, derive_seed(base_seed, r));
  });

  double sum = 0.0;
  for (const auto& row : out.rows) {
    sum += row.stats.mean_siblings();
    out.identity_holds = out.identity_holds && row.identity_holds;
  }
  out.mean_siblings = sum / static_cast<double>(reps);
  if (reps > 1) {
    double ss = 0.0;
    for (const auto& row : out.rows) {
      const double dev = row.stats.mean_siblings() - out.mean_siblings;
      ss += dev * dev;
    }
    out.std_error = std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps));
  }
  return out;
}

bool prefix_matches_naive(const Space& space, std::size_t n, std::size_t prefix,
                          std::uint64_t seed) {
  prefix = std::min(prefix, n);
  const PointSet points = sample_points(space, n, derive_seed(seed, 0));
  const std::uint64_t tie_seed = derive_seed(seed, 1);
  const LabelledTree fast = build_nnt_accelerated(space, points, tie_seed);
  const LabelledTree slow = build_nnt(space, points.prefix(prefix), tie_seed);
  for (std::size_t i = 0; i < prefix; ++i) {
    if (fast.parent(i) != slow.parent(i)) return false;
  }
  return true;
}

}  // namespace nntlab
