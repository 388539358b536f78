#pragma once

// Labelled nearest-neighbour trees.
//
// Node i (0-based here; label i+1 in the usual 1-based notation) attaches to
// the earlier point nearest to it. Exact distance ties are broken uniformly
// using a stream keyed by (tie_seed, i); in the Rrt space every earlier node
// ties, which yields the random recursive tree.

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "nntlab/spaces.hpp"

namespace nntlab {

class LabelledTree {
 public:
  static constexpr std::uint32_t kNoParent = std::numeric_limits<std::uint32_t>::max();

  /// parent[0] must be kNoParent and parent[i] < i for i >= 1.
  explicit LabelledTree(std::vector<std::uint32_t> parent,
                        std::vector<double> attach_distance = {});

  /// Builds from 1-based labels: parents[k] is the parent label of node k+1,
  /// with 0 for the root. {0, 1, 2} is the path 1 <- 2 <- 3.
  static LabelledTree from_one_based(std::span<const std::uint32_t> parents);

  std::size_t size() const noexcept { return parent_.size(); }
  std::uint32_t parent(std::size_t i) const noexcept { return parent_[i]; }
  std::span<const std::uint32_t> parents() const noexcept { return parent_; }
  /// Realised nearest distances (entry 0 is 0); empty when not recorded.
  std::span<const double> attach_distances() const noexcept { return attach_distance_; }

  /// Equality of the parent maps.
  friend bool operator==(const LabelledTree& a, const LabelledTree& b) {
    return a.parent_ == b.parent_;
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<double> attach_distance_;
};

/// O(n^2) reference builder.
LabelledTree build_nnt(const Space& space, const PointSet& points, std::uint64_t tie_seed);

/// Same contract and output as build_nnt. Torus: incremental uniform cell
/// grid with exact expanding-ring search. Sphere: exact scan over a
/// structure-of-arrays copy of the coordinates. Rrt: direct uniform draw.
LabelledTree build_nnt_accelerated(const Space& space, const PointSet& points,
                                   std::uint64_t tie_seed);

/// Index among `tie_count` tied candidates (sorted by label) chosen for node i.
std::uint64_t tie_choice(std::uint64_t tie_seed, std::uint64_t node, std::uint64_t tie_count);

/// One line per node, "label<TAB>parent_label", 1-based, root parent 0.
void write_tree_dump(std::ostream& out, const LabelledTree& tree);
LabelledTree read_tree_dump(std::istream& in);

}  // namespace nntlab
