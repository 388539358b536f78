#pragma once

// Sibling and degree statistics of labelled trees.
//
// All counts are kept as integers; the squared-degree identity
//   sum_i deg(i)^2 = sum_{i>=2} s(i) + 4(n-1) - 2 deg(root)
// therefore holds exactly and is checked in integer arithmetic.

#include <cstdint>
#include <span>
#include <vector>

#include "nntlab/nnt.hpp"

namespace nntlab {

struct TreeStats {
  std::uint64_t n = 0;
  std::uint64_t sibling_sum = 0;    // sum over non-root nodes of s(i)
  std::uint64_t sq_degree_sum = 0;  // sum over all nodes of deg(i)^2
  std::uint64_t root_degree = 0;
  std::uint64_t leaf_count = 0;     // childless nodes
  std::uint64_t depth_last = 0;     // graph distance from the last node to the root

  /// S(T_n) = sibling_sum / n (the root contributes s = 0).
  double mean_siblings() const noexcept {
    return static_cast<double>(sibling_sum) / static_cast<double>(n);
  }
  double mean_sq_degree() const noexcept {
    return static_cast<double>(sq_degree_sum) / static_cast<double>(n);
  }
};

/// Number of children of each node.
std::vector<std::uint64_t> child_counts(const LabelledTree& tree);

/// s(i) for the non-root nodes, in label order (entry k is node k+1, 0-based).
/// Requires n >= 2.
std::vector<std::uint64_t> siblings(const LabelledTree& tree);

/// (1/n) * sum of s(i). Requires n >= 2.
double mean_siblings(const LabelledTree& tree);
double mean_sq_degree(const LabelledTree& tree);
/// Exact integer check of the squared-degree identity.
bool check_deg_identity(const LabelledTree& tree);

std::uint64_t root_degree(const LabelledTree& tree);
std::uint64_t leaf_count(const LabelledTree& tree);
std::uint64_t depth_last(const LabelledTree& tree);

/// All of the above in one O(n) pass.
TreeStats tree_stats(const LabelledTree& tree);

/// H_m = 1 + 1/2 + ... + 1/m.
double harmonic_number(std::uint64_t m);

/// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::span<const double> a, std::span<const double> b);
/// Asymptotic two-sample critical value at level 0.01.
double ks_critical_1pct(std::size_t n_a, std::size_t n_b);

}  // namespace nntlab
