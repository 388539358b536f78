#pragma once

// Metric spaces on which nearest-neighbour trees are grown, and uniform
// i.i.d. sampling on them.
//
//   Sphere(d): unit d-sphere in R^{d+1}, chordal (Euclidean) distance.
//   Torus(d):  [0,1)^d with per-coordinate wrap-around.
//   Rrt:       no geometry; every pair of distinct points is at distance 1.
//
// On the sphere the chordal distance is a monotone function of the geodesic
// one, so nearest neighbours do not depend on that choice.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nntlab {

enum class SpaceKind { Sphere, Torus, Rrt };

class Space {
 public:
  static Space sphere(int d);
  static Space torus(int d);
  static Space rrt() noexcept { return Space(SpaceKind::Rrt, 0); }
  /// Parses "sphere" / "torus" / "rrt"; d is ignored for rrt.
  static Space from_name(std::string_view name, int d);

  SpaceKind kind() const noexcept { return kind_; }
  /// Intrinsic dimension; 0 for Rrt.
  int dim() const noexcept { return dim_; }
  /// Number of stored coordinates per point: d+1, d, or 0.
  std::size_t coord_count() const noexcept;
  std::string_view name() const noexcept;

  friend bool operator==(const Space&, const Space&) = default;

 private:
  Space(SpaceKind kind, int dim) noexcept : kind_(kind), dim_(dim) {}
  SpaceKind kind_;
  int dim_;
};

/// Flat row-major point storage; point(i) is a view of coord_count values.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t coord_count, std::size_t n)
      : coord_count_(coord_count), n_(n), coords_(coord_count * n) {}
  PointSet(std::size_t coord_count, std::size_t n, std::vector<double> coords);

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }
  std::size_t coord_count() const noexcept { return coord_count_; }

  std::span<const double> point(std::size_t i) const noexcept {
    return {coords_.data() + i * coord_count_, coord_count_};
  }
  std::span<double> point(std::size_t i) noexcept {
    return {coords_.data() + i * coord_count_, coord_count_};
  }
  std::span<const double> operator[](std::size_t i) const noexcept { return point(i); }

  const std::vector<double>& flat() const noexcept { return coords_; }

  /// First k points as a new set.
  PointSet prefix(std::size_t k) const;

 private:
  std::size_t coord_count_ = 0;
  std::size_t n_ = 0;
  std::vector<double> coords_;
};

/// n i.i.d. uniform points. Point i depends only on (space, seed, i), so
/// index ranges can be sampled independently.
PointSet sample_points(const Space& space, std::size_t n, std::uint64_t seed);

/// Squared distance; the quantity every nearest-neighbour search compares.
double squared_distance(const Space& space, std::span<const double> a,
                        std::span<const double> b);
double distance(const Space& space, std::span<const double> a, std::span<const double> b);

/// Throws std::invalid_argument unless the set matches the space layout and
/// (for the torus) lies in [0,1).
void validate_points(const Space& space, const PointSet& points);

}  // namespace nntlab
