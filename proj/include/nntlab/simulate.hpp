#pragma once

// Replicated tree simulations on a finite point sample.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "nntlab/nnt.hpp"
#include "nntlab/spaces.hpp"
#include "nntlab/stats.hpp"

namespace nntlab {

struct ReplicateRow {
  std::uint64_t seed = 0;
  TreeStats stats;
  bool identity_holds = false;
};

/// One tree: points from derive_seed(seed, 0), tie-breaking from derive_seed(seed, 1).
ReplicateRow simulate_replicate(const Space& space, std::size_t n, std::uint64_t seed);

struct SimulationSummary {
  std::vector<ReplicateRow> rows;
  double mean_siblings = 0.0;
  double std_error = 0.0;  // of mean_siblings across replicates
  bool identity_holds = true;
};

/// Replicate r uses seed derive_seed(base_seed, r).
SimulationSummary simulate(const Space& space, std::size_t n, std::size_t reps,
                           std::uint64_t base_seed, unsigned workers = 1);

/// Accelerated tree on n points restricted to its first `prefix` nodes
/// equals the naive tree on those points.
bool prefix_matches_naive(const Space& space, std::size_t n, std::size_t prefix,
                          std::uint64_t seed);

}  // namespace nntlab
