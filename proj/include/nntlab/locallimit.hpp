#pragma once

// Poisson nearest-older-neighbour trees on a periodic window.
//
// A unit-intensity Poisson process is realized on the torus of side L; each
// point gets an i.i.d. uniform arrival label and is joined to the nearest
// point with a smaller label. The mean sibling count of this tree estimates
// the limit S_d without finite-n boundary effects.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace nntlab {

struct PoissonSample {
  int d = 0;
  double side = 0.0;
  /// Coordinates in the unit torus, flat row-major; physical = side * coord.
  std::vector<double> coords;
  std::vector<double> labels;
  /// Index of the nearest older point; LabelledTree::kNoParent for the oldest.
  std::vector<std::uint32_t> parent;

  std::size_t size() const noexcept { return labels.size(); }
  double position(std::size_t i, std::size_t axis) const {
    return side * coords[i * static_cast<std::size_t>(d) + axis];
  }
  /// Point i arrived before point j (label order, index breaks ties).
  bool older(std::size_t i, std::size_t j) const noexcept {
    return labels[i] < labels[j] || (labels[i] == labels[j] && i < j);
  }
};

/// Requires d >= 1 and L^d >= 10 (std::invalid_argument otherwise).
PoissonSample sample_poisson_nn(int d, double side, std::uint64_t seed);

/// Sum over points of c(v)(c(v)-1), i.e. the total sibling count.
std::uint64_t sibling_total(const PoissonSample& sample);

enum class LocalMode {
  Geometric,  // nearest older neighbour
  Recursive,  // uniform older parent (labels only)
};

struct LocalEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t reps = 0;
  std::uint64_t total_points = 0;
};

/// Mean over replicates of the per-sample mean sibling count; replicate r
/// uses derive_seed(seed, r) so results do not depend on `workers`.
LocalEstimate estimate_S_local(int d, double side, std::size_t reps, std::uint64_t seed,
                               LocalMode mode = LocalMode::Geometric, unsigned workers = 1);

}  // namespace nntlab
