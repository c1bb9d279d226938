#include "divergia/dimension.hpp"
#include "divergia/error.hpp"
#include "divergia/ifs.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace divergia;
using namespace divergia::test;

TEST_CASE("Moran examples") {
  std::vector<double> halves{0.5, 0.5};
  CHECK(moran_dimension(halves) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<double> thirds{1.0 / 3, 1.0 / 3};
  CHECK(std::abs(moran_dimension(thirds) - std::log(2.0) / std::log(3.0)) < 1e-12);
  for (double theta = 0.1; theta < 0.95; theta += 0.1) {
    double m = std::pow(0.5, 1.0 / theta);
    std::vector<double> r{m, m};
    CHECK(std::abs(moran_dimension(r) - theta) < 1e-9);
  }
  std::vector<double> one{0.3};
  CHECK(moran_dimension(one) == 0.0);
}

TEST_CASE("Moran closed form for equal ratios") {
  for (double c = 0.05; c < 0.46; c += 0.05) {
    std::vector<double> r{c, c};
    CHECK(std::abs(moran_dimension(r) - std::log(0.5) / std::log(c)) <= 1e-9);
  }
}

TEST_CASE("Moran monotonicity") {
  std::vector<double> base{0.2, 0.3};
  std::vector<double> more{0.2, 0.3, 0.1};
  std::vector<double> smaller{0.1, 0.15};
  double s = moran_dimension(base);
  CHECK(moran_dimension(more) > s);
  CHECK(moran_dimension(smaller) < s);
  std::vector<double> big{0.9, 0.9, 0.9};
  CHECK(moran_dimension(big) > 1.0);
}

TEST_CASE("Moran rejects bad ratios") {
  std::vector<double> none;
  std::vector<double> bad{0.5, 1.0};
  std::vector<double> neg{-0.2};
  CHECK_THROWS_AS(moran_dimension(none), ParameterError);
  CHECK_THROWS_AS(moran_dimension(bad), ParameterError);
  CHECK_THROWS_AS(moran_dimension(neg), ParameterError);
}

TEST_CASE("box count examples") {
  CHECK(box_count(IntervalUnion<Rational>::whole({Q(0), Q(1)}), Q(1, 10)) == 10);
  auto d1 = QU({{Q(1, 8), Q(3, 8)}, {Q(5, 8), Q(7, 8)}});
  // Closed endpoints 3/8 and 7/8 open the boxes [3/8, 4/8) and [7/8, 1).
  CHECK(box_count(d1, Q(1, 8)) == 6);
  CHECK(box_count(DU({{0.125, 0.375}, {0.625, 0.875}}), 0.125) == 6);
  CHECK(box_count(IntervalUnion<Rational>::none({Q(0), Q(1)}), Q(1, 4)) == 0);
  CHECK(box_count(QU({{Q(1), Q(1)}}), Q(1, 4)) == 1);
  CHECK_THROWS_AS(box_count(d1, Q(0)), ParameterError);
}

TEST_CASE("box count sandwich") {
  auto nest = cantor_nest(CantorParams<Rational>::make(0.5));
  auto a = nest(6);
  Rational delta = Q(1, 3);
  for (int k = 0; k < 10; ++k) {
    auto n1 = box_count(a, delta);
    auto n2 = box_count(a, delta / 2);
    CHECK(n2 >= n1);
    CHECK(n2 <= 2 * n1 + 2 * a.size());
    delta /= 2;
  }
}

TEST_CASE("box dimension of the unit interval") {
  std::vector<Rational> scales;
  for (int k = 4; k <= 12; ++k) scales.push_back(pow_int(Q(2), -k));
  auto est = box_dimension(IntervalUnion<Rational>::whole({Q(0), Q(1)}), scales);
  CHECK(std::abs(est.estimate - 1.0) <= 0.01);
  CHECK(est.counts.size() == 9);
  for (std::size_t i = 1; i < est.counts.size(); ++i) {
    CHECK(est.counts[i].delta < est.counts[i - 1].delta);
    CHECK(est.counts[i].count >= est.counts[i - 1].count);
  }
}

TEST_CASE("box dimension of ten points") {
  std::vector<Interval<Rational>> pts;
  for (int k = 0; k < 10; ++k) pts.push_back({Q(k, 10) + Q(1, 20), Q(k, 10) + Q(1, 20)});
  IntervalUnion<Rational> a({Q(0), Q(1)}, pts);
  std::vector<Rational> scales;
  for (int k = 8; k <= 16; ++k) scales.push_back(pow_int(Q(2), -k));
  auto est = box_dimension(a, scales);
  CHECK(est.estimate <= 0.1);
  CHECK(est.low_confidence);
}

TEST_CASE("box dimension of Cantor levels") {
  for (auto [theta, level] : {std::pair{0.5, 12}, std::pair{1.0 / 3.0, 12}, std::pair{0.25, 8}}) {
    auto p = CantorParams<Rational>::make(theta);
    auto a = cantor_nest(p)(level);
    std::vector<Rational> scales;
    // Stop before the level's components are resolved.
    Rational finest = pow_int(p.m, level);
    for (Rational d = Q(1, 16); d > finest; d /= 4) scales.push_back(d);
    auto est = box_dimension(a, scales);
    CHECK(std::abs(est.estimate - theta) <= 0.05);
  }
}

TEST_CASE("box dimension needs four scales") {
  std::vector<Rational> scales{Q(1, 2), Q(1, 4), Q(1, 8), Q(1, 8)};
  CHECK_THROWS_AS(box_dimension(IntervalUnion<Rational>::whole({Q(0), Q(1)}), scales), ParameterError);
}

TEST_CASE("box dimension warns about short scale ranges and resolved components") {
  std::vector<Rational> scales{Q(1, 4), Q(1, 8), Q(1, 16), Q(1, 32)};
  auto est = box_dimension(QU({{Q(1, 8), Q(3, 8)}}), scales);
  CHECK(est.warnings.size() == 2);
}

TEST_CASE("automatic scales stop above the component length") {
  auto a = cantor_nest(CantorParams<Rational>::make(0.5))(6);
  auto scales = auto_scales(a);
  CHECK(scales.size() >= 4);
  Rational longest = pow_int(Q(1, 4), 6);
  for (std::size_t i = 4; i < scales.size(); ++i) CHECK(scales[i] >= 2 * longest);
}
