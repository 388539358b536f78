#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "nntlab/locallimit.hpp"
#include "nntlab/nnt.hpp"
#include "nntlab/rng.hpp"

using namespace nntlab;

TEST_SUITE("locallimit") {

TEST_CASE("point count is Poisson with the window volume") {
  const int reps = 1000;
  const double side = 20.0;  // mean 400 in d = 2
  double s = 0.0;
  double ss = 0.0;
  for (int r = 0; r < reps; ++r) {
    const double n = static_cast<double>(sample_poisson_nn(2, side, derive_seed(8, r)).size());
    s += n;
    ss += n * n;
  }
  const double mean = s / reps;
  const double var = ss / reps - mean * mean;
  CHECK(std::abs(mean - 400.0) <= 3.0 * std::sqrt(400.0 / reps));
  CHECK(var == doctest::Approx(400.0).epsilon(0.15));
}

TEST_CASE("parents are older and the oldest point is the root") {
  const PoissonSample ps = sample_poisson_nn(1, 50.0, 3);
  REQUIRE(ps.size() > 10);
  std::size_t roots = 0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    CHECK(ps.labels[i] >= 0.0);
    CHECK(ps.labels[i] < 1.0);
    if (ps.parent[i] == LabelledTree::kNoParent) {
      ++roots;
      for (std::size_t j = 0; j < ps.size(); ++j) CHECK_FALSE(ps.older(j, i));
    } else {
      CHECK(ps.older(ps.parent[i], i));
    }
  }
  CHECK(roots == 1);
}

TEST_CASE("matches the naive builder on label-sorted points") {
  for (int d : {1, 2, 3}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const double side = d == 1 ? 400.0 : (d == 2 ? 20.0 : 7.0);
      const PoissonSample ps = sample_poisson_nn(d, side, seed);
      const std::size_t n = ps.size();
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ps.older(a, b); });
      std::vector<std::size_t> rank(n);
      PointSet pts(static_cast<std::size_t>(d), n);
      for (std::size_t r = 0; r < n; ++r) {
        rank[order[r]] = r;
        for (int k = 0; k < d; ++k) pts.point(r)[k] = ps.coords[order[r] * d + k];
      }
      const LabelledTree tree = build_nnt(Space::torus(d), pts, 0);
      for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t expected = tree.parent(rank[i]);
        if (expected == LabelledTree::kNoParent) {
          REQUIRE(ps.parent[i] == LabelledTree::kNoParent);
        } else {
          REQUIRE(ps.parent[i] == order[expected]);
        }
      }
      std::uint64_t total = 0;
      std::vector<std::uint64_t> children(n, 0);
      for (std::size_t i = 1; i < n; ++i) ++children[tree.parent(i)];
      for (auto c : children) total += c * (c - 1);
      CHECK(sibling_total(ps) == total);
    }
  }
}

TEST_CASE("recursive mode targets two") {
  const LocalEstimate e = estimate_S_local(1, 20000.0, 100, 4, LocalMode::Recursive);
  CHECK(e.reps == 100);
  CHECK(std::abs(e.mean - 2.0) <= 3.0 * e.std_error);
}

TEST_CASE("results do not depend on the worker count") {
  const LocalEstimate a = estimate_S_local(2, 15.0, 6, 12, LocalMode::Geometric, 1);
  const LocalEstimate b = estimate_S_local(2, 15.0, 6, 12, LocalMode::Geometric, 3);
  CHECK(a.mean == b.mean);
  CHECK(a.total_points == b.total_points);
}

TEST_CASE("one-dimensional estimate is near one plus log two") {
  const LocalEstimate e = estimate_S_local(1, 10000.0, 40, 17);
  MESSAGE("d=1 local estimate " << e.mean << " +- " << e.std_error);
  CHECK(std::abs(e.mean - (1.0 + std::log(2.0))) <= 3.0 * e.std_error);
}

TEST_CASE("preconditions") {
  CHECK_THROWS_AS(sample_poisson_nn(0, 10.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_poisson_nn(2, 3.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_poisson_nn(2, -1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(estimate_S_local(2, 10.0, 0, 1), std::invalid_argument);
}

}
