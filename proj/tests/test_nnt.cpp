#include <doctest.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "nntlab/nnt.hpp"
#include "nntlab/rng.hpp"
#include "nntlab/spaces.hpp"

using namespace nntlab;

TEST_SUITE("nnt") {

TEST_CASE("two-node rrt attaches to the root") {
  const LabelledTree t = build_nnt(Space::rrt(), sample_points(Space::rrt(), 2, 0), 0);
  CHECK(t.parent(0) == LabelledTree::kNoParent);
  CHECK(t.parent(1) == 0);
}

TEST_CASE("wrap-around nearest neighbour on the circle torus") {
  const PointSet pts(1, 3, {0.0, 0.4, 0.45});
  for (const auto& t : {build_nnt(Space::torus(1), pts, 1), build_nnt_accelerated(Space::torus(1), pts, 1)}) {
    CHECK(t.parent(1) == 0);
    CHECK(t.parent(2) == 1);
  }
}

TEST_CASE("accelerated builders reproduce the naive builder") {
  const std::vector<Space> spaces{Space::sphere(1), Space::sphere(2), Space::sphere(4),
                                  Space::torus(1), Space::torus(2), Space::torus(3),
                                  Space::torus(5), Space::rrt()};
  for (const Space& space : spaces) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const std::size_t n = 50 + 37 * seed;
      const PointSet pts = sample_points(space, n, seed);
      const LabelledTree slow = build_nnt(space, pts, seed + 100);
      const LabelledTree fast = build_nnt_accelerated(space, pts, seed + 100);
      CAPTURE(space.name());
      CAPTURE(seed);
      CHECK(slow == fast);
    }
  }
}

TEST_CASE("exact distance ties are broken by tie_seed, identically in both builders") {
  // Node 2 at 0.375 is exactly 0.125 from both earlier points.
  const PointSet pts(1, 3, {0.5, 0.25, 0.375});
  int picks[2] = {0, 0};
  for (std::uint64_t s = 0; s < 200; ++s) {
    const LabelledTree slow = build_nnt(Space::torus(1), pts, s);
    CHECK(slow == build_nnt_accelerated(Space::torus(1), pts, s));
    ++picks[slow.parent(2)];
  }
  CHECK(picks[0] > 50);
  CHECK(picks[1] > 50);
}

TEST_CASE("large torus tree agrees with the naive builder on a prefix") {
  const Space space = Space::torus(2);
  const PointSet pts = sample_points(space, 100000, 5);
  const auto start = std::chrono::steady_clock::now();
  const LabelledTree fast = build_nnt_accelerated(space, pts, 9);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  MESSAGE("torus d=2 n=1e5 accelerated build: " << secs << " s");
  CHECK(secs < 30.0);
  const LabelledTree slow = build_nnt(space, pts.prefix(2000), 9);
  for (std::size_t i = 0; i < 2000; ++i) REQUIRE(fast.parent(i) == slow.parent(i));
}

TEST_CASE("rrt with ten thousand nodes matches the naive builder") {
  const PointSet pts = sample_points(Space::rrt(), 10000, 0);
  CHECK(build_nnt(Space::rrt(), pts, 77) == build_nnt_accelerated(Space::rrt(), pts, 77));
}

TEST_CASE("parents always precede their children") {
  for (const Space& space : {Space::sphere(3), Space::torus(2), Space::rrt()}) {
    const LabelledTree t = build_nnt_accelerated(space, sample_points(space, 3000, 8), 8);
    for (std::size_t i = 1; i < t.size(); ++i) REQUIRE(t.parent(i) < i);
  }
}

TEST_CASE("rrt parent is uniform over earlier nodes") {
  const std::size_t n = 10;
  const int reps = 100000;
  std::vector<std::vector<double>> counts(n);
  for (std::size_t i = 0; i < n; ++i) counts[i].assign(i, 0.0);
  const PointSet pts = sample_points(Space::rrt(), n, 0);
  for (int r = 0; r < reps; ++r) {
    const LabelledTree t = build_nnt(Space::rrt(), pts, derive_seed(2024, r));
    for (std::size_t i = 1; i < n; ++i) counts[i][t.parent(i)] += 1.0;
  }
  for (std::size_t i = 2; i < n; ++i) {
    const double expected = static_cast<double>(reps) / static_cast<double>(i);
    double chi2 = 0.0;
    for (double c : counts[i]) chi2 += (c - expected) * (c - expected) / expected;
    const boost::math::chi_squared dist(static_cast<double>(i - 1));
    CAPTURE(i);
    CHECK(chi2 < boost::math::quantile(dist, 0.999));
  }
}

TEST_CASE("tree dump round-trips with one-based labels") {
  const std::vector<std::uint32_t> one_based{0, 1, 1, 2};
  const LabelledTree t = LabelledTree::from_one_based(one_based);
  std::ostringstream os;
  write_tree_dump(os, t);
  CHECK(os.str() == "1\t0\n2\t1\n3\t1\n4\t2\n");
  std::istringstream is(os.str());
  CHECK(read_tree_dump(is) == t);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(build_nnt(Space::torus(2), PointSet(2, 0), 0), std::invalid_argument);
  CHECK_THROWS_AS(build_nnt(Space::torus(2), PointSet(3, 4), 0), std::invalid_argument);
  CHECK_THROWS_AS(build_nnt_accelerated(Space::sphere(2), PointSet(2, 4), 0), std::invalid_argument);
  CHECK_THROWS_AS(LabelledTree(std::vector<std::uint32_t>{LabelledTree::kNoParent, 1}), std::invalid_argument);
}

}
