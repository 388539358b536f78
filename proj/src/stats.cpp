#include "nntlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nntlab {

std::vector<std::uint64_t> child_counts(const LabelledTree& tree) {
  std::vector<std::uint64_t> c(tree.size(), 0);
  for (std::size_t i = 1; i < tree.size(); ++i) ++c[tree.parent(i)];
  return c;
}

namespace {

void require_two(const LabelledTree& tree) {
  if (tree.size() < 2) throw std::invalid_argument("sibling statistics need n >= 2");
}

std::uint64_t degree_of(const std::vector<std::uint64_t>& c, std::size_t i) {
  return c[i] + (i == 0 ? 0 : 1);
}

}  // namespace

std::vector<std::uint64_t> siblings(const LabelledTree& tree) {
  require_two(tree);
  const auto c = child_counts(tree);
  std::vector<std::uint64_t> s(tree.size() - 1);
  for (std::size_t i = 1; i < tree.size(); ++i) s[i - 1] = c[tree.parent(i)] - 1;
  return s;
}

double mean_siblings(const LabelledTree& tree) {
  require_two(tree);
  return tree_stats(tree).mean_siblings();
}

double mean_sq_degree(const LabelledTree& tree) { return tree_stats(tree).mean_sq_degree(); }

bool check_deg_identity(const LabelledTree& tree) {
  const TreeStats st = tree_stats(tree);
  return st.sq_degree_sum + 2 * st.root_degree == st.sibling_sum + 4 * (st.n - 1);
}

std::uint64_t root_degree(const LabelledTree& tree) { return child_counts(tree)[0]; }

std::uint64_t leaf_count(const LabelledTree& tree) {
  const auto c = child_counts(tree);
  return static_cast<std::uint64_t>(std::count(c.begin(), c.end(), std::uint64_t{0}));
}

std::uint64_t depth_last(const LabelledTree& tree) {
  std::uint64_t depth = 0;
  for (std::size_t v = tree.size() - 1; v != 0; v = tree.parent(v)) ++depth;
  return depth;
}

TreeStats tree_stats(const LabelledTree& tree) {
  const auto c = child_counts(tree);
  TreeStats st;
  st.n = tree.size();
  for (std::size_t v = 0; v < c.size(); ++v) {
    // Each child of v has c(v) - 1 siblings.
    if (c[v] > 0) st.sibling_sum += c[v] * (c[v] - 1);
    const std::uint64_t deg = degree_of(c, v);
    st.sq_degree_sum += deg * deg;
    if (c[v] == 0) ++st.leaf_count;
  }
  st.root_degree = c[0];
  st.depth_last = depth_last(tree);
  return st;
}

double harmonic_number(std::uint64_t m) {
  double h = 0.0;
  for (std::uint64_t k = m; k >= 1; --k) h += 1.0 / static_cast<double>(k);
  return h;
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double na = static_cast<double>(x.size());
  const double nb = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_critical_1pct(std::size_t n_a, std::size_t n_b) {
  const double c = std::sqrt(-0.5 * std::log(0.005));
  const double na = static_cast<double>(n_a);
  const double nb = static_cast<double>(n_b);
  return c * std::sqrt((na + nb) / (na * nb));
}

}  // namespace nntlab
