#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "nntlab/integrate.hpp"
#include "nntlab/quadrature.hpp"

using namespace nntlab;

namespace {

// Mean sibling count of the one-dimensional tree with only the u2 integral
// done by hand; v and u1 are integrated numerically.
double s1_oracle(bool first, bool second) {
  AdaptiveOptions inner;
  inner.tol = {1e-13, 0.0};
  AdaptiveOptions outer;
  outer.tol = {1e-11, 0.0};
  auto middle = [&](double u1) -> Sample {
    if (u1 <= 0.0) return {0.0, 0.0};
    auto g = [&](double v) {
      if (v <= 0.0) return 0.0;
      double out = 0.0;
      if (first) out += 2.0 * std::log(u1 / v);
      if (second) out -= std::log(2.0 * u1 / (u1 + v));
      return out;
    };
    const QuadResult r = integrate(g, 0.0, u1, inner);
    return {r.value / u1, r.abs_error_estimate / u1};
  };
  return integrate_nested(middle, 0.0, 1.0, outer).value;
}

// Random recursive tree limit as a fully numerical triple integral.
double s_infinity_triple() {
  AdaptiveOptions o3;
  o3.tol = {1e-11, 0.0};
  AdaptiveOptions o2;
  o2.tol = {1e-9, 0.0};
  AdaptiveOptions o1;
  o1.tol = {1e-8, 0.0};
  auto over_y = [&](double x) -> Sample {
    if (x <= 0.0) return {0.0, 0.0};
    auto over_z = [&](double y) -> Sample {
      if (y <= 0.0) return {0.0, 0.0};
      const QuadResult r = integrate([](double z) { return 1.0 / z; }, y, 1.0, o3);
      return {r.value / x, r.abs_error_estimate / x};
    };
    const QuadResult r = integrate_nested(over_z, 0.0, x, o2);
    return {r.value, r.abs_error_estimate};
  };
  return integrate_nested(over_y, 0.0, 1.0, o1).value;
}

}  // namespace

TEST_SUITE("quadrature") {

TEST_CASE("normalization returns two") {
  for (int d = 2; d <= 12; ++d) {
    const QuadResult r = s_d_direct(d, 1e-9, SdKernel::Identity);
    INFO("d=" << d);
    CHECK(std::abs(r.value - 2.0) <= 1e-8);
  }
}

TEST_CASE("decomposition is consistent") {
  for (int d = 2; d <= 6; ++d) {
    const QuadResult s = s_d_direct(d, 1e-9);
    const QuadResult tp = t_plus(d, 1e-10);
    const QuadResult tm = t_minus(d, 1e-10);
    INFO("d=" << d);
    CHECK(tp.value > 0.0);
    CHECK(tm.value >= 0.0);
    CHECK(s.abs_error_estimate <= 1e-9);
    CHECK(s.truncation_bound <= 1e-9);
    CHECK(std::abs(s.value - (2.0 - tp.value + tm.value)) <=
          s.abs_error_estimate + tp.abs_error_estimate + tm.abs_error_estimate);
    CHECK(s.value > 1.0);
    CHECK(s.value < 2.0);
  }
}

TEST_CASE("high dimension stays in its band") {
  const int d = 30;
  const double s = s_d_direct(d, 1e-8).value;
  CHECK(s > 2.0 - 2.0 * std::pow(std::sqrt(3.0) / 2.0, d / 2.0));
  CHECK(s < 2.0);
}

TEST_CASE("refining the tolerance converges") {
  const QuadResult coarse = s_d_direct(3, 1e-5);
  const QuadResult fine = s_d_direct(3, 1e-11);
  CHECK(std::abs(coarse.value - fine.value) <= coarse.abs_error_estimate + fine.abs_error_estimate);
  CHECK(coarse.evaluations < fine.evaluations);
}

TEST_CASE("positive-part asymptotics") {
  double prev_gap = 1.0;
  for (int d : {25, 50, 100, 200}) {
    const double ratio = t_plus(d, Tolerance{0.0, 1e-10}).value / t_plus_asymptotic(d);
    const double gap = std::abs(ratio - 1.0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 0.05);
  CHECK(t_plus_asymptotic(2) == doctest::Approx(2 * std::sqrt(2 * std::numbers::pi) / 3 / std::sqrt(2.0) * 0.75));
}

TEST_CASE("asymptotic constants") {
  const double s3 = std::sqrt(3.0);
  const QuadResult a = lemma6_first(1e-12);
  const QuadResult b = lemma6_second(1e-12);
  CHECK(std::abs(a.value - (std::numbers::pi * s3 - 3.0) / 8.0) <= 1e-10);
  CHECK(std::abs(b.value - (std::numbers::pi * s3 + 3.0) / 8.0) <= 1e-10);
}

TEST_CASE("one-dimensional constant") {
  const double ln2 = std::log(2.0);
  const QuadResult both = s1_reduced_integral(1e-10);
  CHECK(both.abs_error_estimate <= 1e-10);
  CHECK(std::abs(both.value - (1.0 + ln2)) <= 1e-10);
  const double first = s1_reduced_integral(1e-10, S1Terms::First).value;
  const double second = s1_reduced_integral(1e-10, S1Terms::Second).value;
  CHECK(first == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(second == doctest::Approx(1.0 - ln2).epsilon(1e-9));
  CHECK(first - second == doctest::Approx(both.value).epsilon(1e-12));

  CHECK(std::abs(s1_oracle(true, true) - both.value) <= 1e-9);
  CHECK(std::abs(s1_oracle(true, false) - first) <= 1e-9);
}

TEST_CASE("random recursive tree constant") {
  CHECK(std::abs(s_infinity_reduced_integral() - 2.0) <= 1e-12);
  AdaptiveOptions opts;
  opts.tol = {1e-13, 0.0};
  CHECK(integrate([](double y) { return std::log(y); }, 0.0, 1.0, opts).value ==
        doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::abs(s_infinity_triple() - 2.0) <= 1e-6);
}

TEST_CASE("table rows") {
  const std::vector<int> one{2};
  const auto rows = sd_table(one, 1e-8);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].d == 2);
  CHECK(rows[0].decomposition_excess() <= 0.0);
  const std::vector<int> many{2, 3, 4, 5};
  const auto table = sd_table(many, 1e-8, 2);
  REQUIRE(table.size() == 4);
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(table[i].d == many[i]);
    CHECK(table[i].s_d.value > 1.0);
    CHECK(table[i].s_d.value < 2.0);
    CHECK(table[i].decomposition_excess() <= 0.0);
  }
  CHECK_FALSE(monotone_trend(table).empty());
}

TEST_CASE("invalid requests") {
  CHECK_THROWS_AS(s_d_direct(1, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(s_d_direct(3, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(t_plus(1, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(t_minus(0, 1e-8), std::invalid_argument);
  CHECK_THROWS_AS(s1_reduced_integral(-1.0), std::invalid_argument);
}

}
