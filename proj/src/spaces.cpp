#include "nntlab/spaces.hpp"

#include <cmath>
#include <stdexcept>

#include "nntlab/rng.hpp"

namespace nntlab {

Space Space::sphere(int d) {
  if (d < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  return Space(SpaceKind::Sphere, d);
}

Space Space::torus(int d) {
  if (d < 1) throw std::invalid_argument("torus dimension must be >= 1");
  return Space(SpaceKind::Torus, d);
}

Space Space::from_name(std::string_view name, int d) {
  if (name == "sphere") return sphere(d);
  if (name == "torus") return torus(d);
  if (name == "rrt") return rrt();
  throw std::invalid_argument("unknown space '" + std::string(name) + "'");
}

std::size_t Space::coord_count() const noexcept {
  switch (kind_) {
    case SpaceKind::Sphere: return static_cast<std::size_t>(dim_) + 1;
    case SpaceKind::Torus: return static_cast<std::size_t>(dim_);
    case SpaceKind::Rrt: return 0;
  }
  return 0;
}

std::string_view Space::name() const noexcept {
  switch (kind_) {
    case SpaceKind::Sphere: return "sphere";
    case SpaceKind::Torus: return "torus";
    case SpaceKind::Rrt: return "rrt";
  }
  return "?";
}

PointSet::PointSet(std::size_t coord_count, std::size_t n, std::vector<double> coords)
    : coord_count_(coord_count), n_(n), coords_(std::move(coords)) {
  if (coords_.size() != coord_count_ * n_) {
    throw std::invalid_argument("PointSet: coordinate buffer has wrong length");
  }
}

PointSet PointSet::prefix(std::size_t k) const {
  if (k > n_) throw std::out_of_range("PointSet::prefix: k exceeds size");
  return PointSet(coord_count_, k,
                  std::vector<double>(coords_.begin(),
                                      coords_.begin() + static_cast<std::ptrdiff_t>(k * coord_count_)));
}

PointSet sample_points(const Space& space, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample_points: n must be >= 1");
  const std::size_t m = space.coord_count();
  PointSet out(m, n);

  switch (space.kind()) {
    case SpaceKind::Rrt:
      break;
    case SpaceKind::Torus:
      for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 rng(derive_seed(seed, i));
        for (double& x : out.point(i)) x = rng.uniform();
      }
      break;
    case SpaceKind::Sphere:
      for (std::size_t i = 0; i < n; ++i) {
        SplitMix64 rng(derive_seed(seed, i));
        auto p = out.point(i);
        for (std::size_t k = 0; k < m; k += 2) {
          const auto [g0, g1] = rng.normal_pair();
          p[k] = g0;
          if (k + 1 < m) p[k + 1] = g1;
        }
        double norm2 = 0.0;
        for (double x : p) norm2 += x * x;
        if (norm2 == 0.0) {
          // Only reachable if every radius draw was exactly zero.
          p[0] = 1.0;
          continue;
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& x : p) x *= inv;
      }
      break;
  }
  return out;
}

namespace {

void check_dims(const Space& space, std::span<const double> a, std::span<const double> b) {
  const std::size_t m = space.coord_count();
  if (a.size() != m || b.size() != m) {
    throw std::invalid_argument("distance: point dimension does not match space");
  }
}

}  // namespace

double squared_distance(const Space& space, std::span<const double> a,
                        std::span<const double> b) {
  check_dims(space, a, b);
  double s = 0.0;
  switch (space.kind()) {
    case SpaceKind::Rrt:
      return 1.0;
    case SpaceKind::Sphere:
      for (std::size_t k = 0; k < a.size(); ++k) {
        const double t = a[k] - b[k];
        s += t * t;
      }
      return s;
    case SpaceKind::Torus:
      for (std::size_t k = 0; k < a.size(); ++k) {
        double t = std::abs(a[k] - b[k]);
        t = std::min(t, 1.0 - t);
        s += t * t;
      }
      return s;
  }
  return s;
}

double distance(const Space& space, std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(space, a, b));
}

void validate_points(const Space& space, const PointSet& points) {
  if (points.coord_count() != space.coord_count()) {
    throw std::invalid_argument("points do not match the space dimension");
  }
  if (space.kind() == SpaceKind::Torus) {
    for (double x : points.flat()) {
      if (!(x >= 0.0 && x < 1.0)) {
        throw std::invalid_argument("torus coordinates must lie in [0,1)");
      }
    }
  }
}

}  // namespace nntlab
