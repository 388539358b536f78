#pragma once

// Uniform cell grid over the unit torus [0,1)^d for exact nearest-neighbour
// search by expanding Chebyshev shells. Internal to the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace nntlab::detail {

class TorusGrid {
 public:
  TorusGrid(int d, std::size_t n) : d_(static_cast<std::size_t>(d)) {
    // About one point per cell once all n points are inserted.
    double k = std::floor(std::pow(static_cast<double>(n), 1.0 / d));
    const double max_cells = 1 << 24;
    while (k > 1 && std::pow(k, d) > max_cells) k -= 1;
    k_ = std::max<std::size_t>(1, static_cast<std::size_t>(k));
    std::size_t total = 1;
    for (std::size_t a = 0; a < d_; ++a) total *= k_;
    cells_.resize(total);
    stamp_.assign(total, kUnstamped);
    cell_side_ = 1.0 / static_cast<double>(k_);
  }

  std::size_t cells_per_axis() const noexcept { return k_; }

  void coords_of(std::span<const double> p, std::vector<std::ptrdiff_t>& c) const {
    for (std::size_t a = 0; a < d_; ++a) {
      auto ci = static_cast<std::ptrdiff_t>(p[a] * static_cast<double>(k_));
      c[a] = std::min<std::ptrdiff_t>(ci, static_cast<std::ptrdiff_t>(k_) - 1);
    }
  }

  std::size_t flat_index(const std::vector<std::ptrdiff_t>& c) const {
    std::size_t idx = 0;
    const auto k = static_cast<std::ptrdiff_t>(k_);
    for (std::size_t a = 0; a < d_; ++a) {
      const std::ptrdiff_t w = ((c[a] % k) + k) % k;
      idx = idx * k_ + static_cast<std::size_t>(w);
    }
    return idx;
  }

  void insert(std::size_t cell, std::uint32_t point) { cells_[cell].push_back(point); }

  // Visits every not-yet-stamped cell at Chebyshev offset exactly r from
  // `centre`, stamping it with `query`.
  template <class Visit>
  void visit_shell(const std::vector<std::ptrdiff_t>& centre, std::ptrdiff_t r, std::uint32_t query,
                   Visit&& visit) {
    offset_.assign(d_, 0);
    shell_rec(centre, r, 0, false, query, visit);
  }

  double cell_side() const noexcept { return cell_side_; }

 private:
  static constexpr std::uint32_t kUnstamped = std::numeric_limits<std::uint32_t>::max();

  template <class Visit>
  void shell_rec(const std::vector<std::ptrdiff_t>& centre, std::ptrdiff_t r, std::size_t axis,
                 bool on_shell, std::uint32_t query, Visit& visit) {
    if (axis == d_) {
      if (!on_shell) return;
      cur_.resize(d_);
      for (std::size_t a = 0; a < d_; ++a) cur_[a] = centre[a] + offset_[a];
      const std::size_t idx = flat_index(cur_);
      if (stamp_[idx] == query) return;
      stamp_[idx] = query;
      visit(cells_[idx]);
      return;
    }
    const bool last = axis + 1 == d_;
    if (last && !on_shell) {
      // Only the two faces remain.
      for (std::ptrdiff_t o : {-r, r}) {
        offset_[axis] = o;
        shell_rec(centre, r, axis + 1, true, query, visit);
        if (r == 0) break;
      }
      return;
    }
    for (std::ptrdiff_t o = -r; o <= r; ++o) {
      offset_[axis] = o;
      shell_rec(centre, r, axis + 1, on_shell || o == -r || o == r, query, visit);
    }
  }

  std::size_t d_;
  std::size_t k_ = 1;
  double cell_side_ = 1.0;
  std::vector<std::vector<std::uint32_t>> cells_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::ptrdiff_t> offset_;
  std::vector<std::ptrdiff_t> cur_;
};

}  // namespace nntlab::detail
