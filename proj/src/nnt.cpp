#include "nntlab/nnt.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#if defined(__SSE2__)
#include <emmintrin.h>
#endif

#include "nntlab/rng.hpp"
#include "torus_grid.hpp"

namespace nntlab {

LabelledTree::LabelledTree(std::vector<std::uint32_t> parent, std::vector<double> attach_distance)
    : parent_(std::move(parent)), attach_distance_(std::move(attach_distance)) {
  if (parent_.empty()) throw std::invalid_argument("LabelledTree: empty tree");
  if (parent_[0] != kNoParent) throw std::invalid_argument("LabelledTree: root must have no parent");
  for (std::size_t i = 1; i < parent_.size(); ++i) {
    if (parent_[i] >= i) throw std::invalid_argument("LabelledTree: parent[i] must be < i");
  }
  if (!attach_distance_.empty() && attach_distance_.size() != parent_.size()) {
    throw std::invalid_argument("LabelledTree: attach distances have wrong length");
  }
}

LabelledTree LabelledTree::from_one_based(std::span<const std::uint32_t> parents) {
  std::vector<std::uint32_t> p(parents.size());
  for (std::size_t i = 0; i < parents.size(); ++i) {
    p[i] = parents[i] == 0 ? kNoParent : parents[i] - 1;
  }
  return LabelledTree(std::move(p));
}

std::uint64_t tie_choice(std::uint64_t tie_seed, std::uint64_t node, std::uint64_t tie_count) {
  if (tie_count <= 1) return 0;
  SplitMix64 rng(derive_seed(tie_seed, node));
  return rng.below(tie_count);
}

namespace {

using detail::TorusGrid;

void check_input(const Space& space, const PointSet& points) {
  if (points.empty()) throw std::invalid_argument("build_nnt: no points");
  if (points.size() >= LabelledTree::kNoParent) {
    throw std::invalid_argument("build_nnt: too many points");
  }
  validate_points(space, points);
}

// Shared tail of every builder: resolve the tie set of node i.
std::uint32_t pick(std::vector<std::uint32_t>& ties, std::uint64_t tie_seed, std::size_t i) {
  if (ties.size() == 1) return ties.front();
  std::sort(ties.begin(), ties.end());
  ties.erase(std::unique(ties.begin(), ties.end()), ties.end());
  return ties[tie_choice(tie_seed, i, ties.size())];
}

LabelledTree build_rrt(std::size_t n, std::uint64_t tie_seed) {
  std::vector<std::uint32_t> parent(n, LabelledTree::kNoParent);
  std::vector<double> dist(n, 1.0);
  dist[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    parent[i] = static_cast<std::uint32_t>(tie_choice(tie_seed, i, i));
  }
  return LabelledTree(std::move(parent), std::move(dist));
}

// Squared distances from `query` to the first `count` points of a
// structure-of-arrays layout, written to `out`; returns their minimum.
// The accumulation order over coordinates matches squared_distance().
double sphere_scan(const std::vector<std::vector<double>>& soa, std::span<const double> query,
                   std::size_t count, double* out) {
  const std::size_t m = soa.size();
  std::size_t j = 0;
  double best = std::numeric_limits<double>::infinity();
#if defined(__SSE2__)
  __m128d vbest0 = _mm_set1_pd(best);
  __m128d vbest1 = vbest0;
  for (; j + 4 <= count; j += 4) {
    __m128d acc0 = _mm_setzero_pd();
    __m128d acc1 = _mm_setzero_pd();
    for (std::size_t k = 0; k < m; ++k) {
      const __m128d q = _mm_set1_pd(query[k]);
      const __m128d t0 = _mm_sub_pd(_mm_loadu_pd(soa[k].data() + j), q);
      const __m128d t1 = _mm_sub_pd(_mm_loadu_pd(soa[k].data() + j + 2), q);
      acc0 = _mm_add_pd(acc0, _mm_mul_pd(t0, t0));
      acc1 = _mm_add_pd(acc1, _mm_mul_pd(t1, t1));
    }
    _mm_storeu_pd(out + j, acc0);
    _mm_storeu_pd(out + j + 2, acc1);
    vbest0 = _mm_min_pd(vbest0, acc0);
    vbest1 = _mm_min_pd(vbest1, acc1);
  }
  alignas(16) double lanes[2];
  _mm_store_pd(lanes, _mm_min_pd(vbest0, vbest1));
  best = std::min(lanes[0], lanes[1]);
#endif
  for (; j < count; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double t = soa[k][j] - query[k];
      s += t * t;
    }
    out[j] = s;
    best = std::min(best, s);
  }
  return best;
}

LabelledTree build_sphere_scan(const Space& space, const PointSet& points, std::uint64_t tie_seed) {
  const std::size_t n = points.size();
  const std::size_t m = space.coord_count();
  std::vector<std::vector<double>> soa(m, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < m; ++k) soa[k][i] = points[i][k];
  }
  std::vector<std::uint32_t> parent(n, LabelledTree::kNoParent);
  std::vector<double> dist(n, 0.0);
  std::vector<double> buffer(n);
  std::vector<std::uint32_t> ties;
  for (std::size_t i = 1; i < n; ++i) {
    const double best = sphere_scan(soa, points[i], i, buffer.data());
    ties.clear();
    for (std::size_t j = 0; j < i; ++j) {
      if (buffer[j] == best) ties.push_back(static_cast<std::uint32_t>(j));
    }
    parent[i] = pick(ties, tie_seed, i);
    dist[i] = std::sqrt(best);
  }
  return LabelledTree(std::move(parent), std::move(dist));
}

// Incremental uniform grid on [0,1)^d with k cells per axis.
inline double torus_sq(const double* a, const double* b, std::size_t m) {
  double s = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    double t = std::abs(a[k] - b[k]);
    t = std::min(t, 1.0 - t);
    s += t * t;
  }
  return s;
}

LabelledTree build_torus_grid(const Space& space, const PointSet& points, std::uint64_t tie_seed) {
  const std::size_t n = points.size();
  const std::size_t m = space.coord_count();
  TorusGrid grid(space.dim(), n);
  const auto k = static_cast<std::ptrdiff_t>(grid.cells_per_axis());
  const double h = grid.cell_side();
  const double* flat = points.flat().data();

  std::vector<std::uint32_t> parent(n, LabelledTree::kNoParent);
  std::vector<double> dist(n, 0.0);
  std::vector<std::ptrdiff_t> centre(m);
  std::vector<std::uint32_t> ties;

  grid.coords_of(points[0], centre);
  grid.insert(grid.flat_index(centre), 0);

  for (std::size_t i = 1; i < n; ++i) {
    const double* q = flat + i * m;
    grid.coords_of(points[i], centre);
    double best = std::numeric_limits<double>::infinity();
    ties.clear();
    const auto query = static_cast<std::uint32_t>(i);
    auto visit = [&](const std::vector<std::uint32_t>& cell) {
      for (std::uint32_t j : cell) {
        const double s = torus_sq(flat + static_cast<std::size_t>(j) * m, q, m);
        if (s < best) {
          best = s;
          ties.assign(1, j);
        } else if (s == best) {
          ties.push_back(j);
        }
      }
    };
    for (std::ptrdiff_t r = 0;; ++r) {
      grid.visit_shell(centre, r, query, visit);
      if (2 * r + 1 >= k) break;  // every cell visited
      // Unvisited cells lie at least r cells away along some axis.
      const double reach = static_cast<double>(r) * h;
      if (best < reach * reach * (1.0 - 1e-12)) break;
    }
    parent[i] = pick(ties, tie_seed, i);
    dist[i] = std::sqrt(best);
    grid.insert(grid.flat_index(centre), query);
  }
  return LabelledTree(std::move(parent), std::move(dist));
}

}  // namespace

LabelledTree build_nnt(const Space& space, const PointSet& points, std::uint64_t tie_seed) {
  check_input(space, points);
  const std::size_t n = points.size();
  std::vector<std::uint32_t> parent(n, LabelledTree::kNoParent);
  std::vector<double> dist(n, 0.0);
  std::vector<std::uint32_t> ties;
  for (std::size_t i = 1; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    ties.clear();
    for (std::size_t j = 0; j < i; ++j) {
      const double s = squared_distance(space, points[j], points[i]);
      if (s < best) {
        best = s;
        ties.assign(1, static_cast<std::uint32_t>(j));
      } else if (s == best) {
        ties.push_back(static_cast<std::uint32_t>(j));
      }
    }
    parent[i] = pick(ties, tie_seed, i);
    dist[i] = std::sqrt(best);
  }
  return LabelledTree(std::move(parent), std::move(dist));
}

LabelledTree build_nnt_accelerated(const Space& space, const PointSet& points,
                                   std::uint64_t tie_seed) {
  check_input(space, points);
  switch (space.kind()) {
    case SpaceKind::Rrt: return build_rrt(points.size(), tie_seed);
    case SpaceKind::Sphere: return build_sphere_scan(space, points, tie_seed);
    case SpaceKind::Torus: return build_torus_grid(space, points, tie_seed);
  }
  throw std::logic_error("build_nnt_accelerated: unknown space");
}

void write_tree_dump(std::ostream& out, const LabelledTree& tree) {
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const std::uint32_t p = tree.parent(i);
    out << (i + 1) << '\t' << (p == LabelledTree::kNoParent ? 0 : std::uint64_t{p} + 1) << '\n';
  }
}

LabelledTree read_tree_dump(std::istream& in) {
  std::vector<std::uint32_t> parents;
  std::string line;
  std::size_t expected = 1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::uint64_t label = 0;
    std::uint64_t par = 0;
    if (!(row >> label >> par) || label != expected) {
      throw std::invalid_argument("tree dump: malformed line " + std::to_string(expected));
    }
    parents.push_back(static_cast<std::uint32_t>(par));
    ++expected;
  }
  return LabelledTree::from_one_based(parents);
}

}  // namespace nntlab
