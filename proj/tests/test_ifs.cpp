#include "divergia/error.hpp"
#include "divergia/ifs.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace divergia;
using namespace divergia::test;

namespace {

IntervalUnion<Rational> dyadic_level(int n) {
  switch (n) {
    case 1:
      return QU({{Q(1, 8), Q(3, 8)}, {Q(5, 8), Q(7, 8)}});
    case 2:
      return QU({{Q(5, 32), Q(7, 32)}, {Q(9, 32), Q(11, 32)}, {Q(21, 32), Q(23, 32)}, {Q(25, 32), Q(27, 32)}});
    default: {
      std::vector<Interval<Rational>> parts;
      for (int a : {21, 25, 37, 41, 85, 89, 101, 105}) parts.push_back({Q(a, 128), Q(a + 2, 128)});
      return IntervalUnion<Rational>({Q(0), Q(1)}, parts);
    }
  }
}

CantorParams<Rational> quarter_params() { return CantorParams<Rational>::make(0.5, Q(1, 2)); }

}  // namespace

TEST_CASE("similarities") {
  Similarity<Rational> s(Q(1, 2), Q(0));
  CHECK(s(Q(1)) == Q(1, 2));
  CHECK(s.inverse(Q(1, 4)) == Q(1, 2));
  CHECK(s.image({Q(0), Q(1)}) == Interval<Rational>{Q(0), Q(1, 2)});
  Similarity<Rational> flip(Q(-1, 2), Q(1));
  CHECK(flip.image({Q(0), Q(1)}) == Interval<Rational>{Q(1, 2), Q(1)});
  CHECK_THROWS_AS(Similarity<Rational>(Q(1), Q(0)), ParameterError);
  CHECK_THROWS_AS(Similarity<Rational>(Q(0), Q(0)), ParameterError);
}

TEST_CASE("Cantor maps for m = 1/4, eps = 1/2") {
  auto p = quarter_params();
  CHECK(p.m == Q(1, 4));
  auto [fl, fr] = cantor_maps(p);
  CHECK(fl.ratio == Q(1, 4));
  CHECK(fl.offset == Q(1, 8));
  CHECK(fr.ratio == Q(-1, 4));
  CHECK(fl.image({Q(0), Q(1)}) == Interval<Rational>{Q(1, 8), Q(3, 8)});
  CHECK(fr.image({Q(0), Q(1)}) == Interval<Rational>{Q(5, 8), Q(7, 8)});
}

TEST_CASE("images of the two maps are disjoint") {
  for (double theta : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    auto p = CantorParams<double>::make(theta);
    auto [fl, fr] = cantor_maps(p);
    CHECK(fl.image({0.0, 1.0}).hi < fr.image({0.0, 1.0}).lo);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(CantorParams<Rational>::make(0.5, Q(1)), ParameterError);
  CHECK_THROWS_AS(CantorParams<Rational>::make(0.5, Q(0)), ParameterError);
  CHECK_THROWS_AS(CantorParams<Rational>::make(0.4), ParameterError);  // m irrational
  CHECK_THROWS_AS(CantorParams<double>::make(1.0), ParameterError);
  CHECK_THROWS_AS(CantorParams<double>::make(0.0), ParameterError);
  CHECK(CantorParams<Rational>::make(0.5).epsilon == Q(1, 2));
  CHECK(CantorParams<Rational>::make(1.0 / 3.0).m == Q(1, 8));
  CHECK(CantorParams<double>::make(0.3).m == doctest::Approx(std::pow(0.5, 1 / 0.3)));
}

TEST_CASE("apply_ifs examples") {
  Similarity<Rational> half(Q(1, 2), Q(0));
  std::vector<Similarity<Rational>> one{half};
  CHECK(apply_ifs<Rational>(one, IntervalUnion<Rational>::whole({Q(0), Q(1)})) == QU({{Q(0), Q(1, 2)}}));

  auto [fl, fr] = cantor_maps(quarter_params());
  std::vector<Similarity<Rational>> maps{fl, fr};
  CHECK(apply_ifs<Rational>(maps, dyadic_level(1)) == dyadic_level(2));
  CHECK(apply_ifs<Rational>(maps, dyadic_level(2)) == dyadic_level(3));

  std::vector<Similarity<Rational>> escape{Similarity<Rational>(Q(1, 2), Q(3, 4))};
  CHECK_THROWS_AS(apply_ifs<Rational>(escape, IntervalUnion<Rational>::whole({Q(0), Q(1)})), ConstructionError);
}

TEST_CASE("nest reproduces the dyadic levels") {
  auto nest = cantor_nest(quarter_params());
  CHECK(nest(0) == IntervalUnion<Rational>::whole({Q(0), Q(1)}));
  for (int n = 1; n <= 3; ++n) CHECK(nest(n) == dyadic_level(n));
  CHECK(nest(10).size() == 1024);
}

TEST_CASE("nest structure") {
  for (double theta : {0.5, 1.0 / 3.0, 0.25}) {
    auto p = CantorParams<Rational>::make(theta);
    auto nest = cantor_nest(p);
    for (std::size_t n = 0; n <= 12; ++n) {
      CHECK(subset_of_relative_interior(nest(n + 1), nest(n)));
      CHECK(measure(nest(n)) == pow_int(Rational(2) * p.m, static_cast<std::int64_t>(n)));
      CHECK(nest(n).size() == (std::size_t{1} << n));
    }
    Rational fixed = p.m * p.epsilon / (Rational(1) - p.m);
    for (std::size_t n = 0; n <= 12; ++n) CHECK(nest(n).contains(fixed));
  }
}

TEST_CASE("uniform Cantor examples") {
  auto p = quarter_params();
  CHECK(uniform_cantor_hull(p) == Interval<Rational>{Q(1, 6), Q(5, 6)});
  CHECK(uniform_cantor_gap(p) == Q(1, 3));
  auto c0 = uniform_cantor(p, 0);
  CHECK(c0 == QU({{Q(1, 6), Q(5, 6)}}));
  CHECK(uniform_cantor(p, 1) == QU({{Q(1, 6), Q(1, 3)}, {Q(2, 3), Q(5, 6)}}));
  auto nest = cantor_nest(p);
  for (std::size_t n = 0; n <= 10; ++n) {
    auto u = uniform_cantor(p, n);
    CHECK(subset_of(u, nest(n)));
    CHECK(hausdorff_distance(u, nest(n)) <= pow_int(p.m, static_cast<std::int64_t>(n)));
  }
}

TEST_CASE("gap formula agrees with the level-1 construction") {
  for (double theta : {0.2, 0.5, 0.8}) {
    auto p = CantorParams<double>::make(theta);
    auto u = uniform_cantor(p, 1);
    REQUIRE(u.size() == 2);
    CHECK(u.components()[1].lo - u.components()[0].hi == doctest::Approx(uniform_cantor_gap(p)));
  }
}

TEST_CASE("fast Cantor Tietze values and integrals match materialization") {
  for (double theta : {0.5, 1.0 / 3.0}) {
    auto p = CantorParams<Rational>::make(theta);
    auto fast = cantor_tietze_family(p);
    auto slow = tietze_family<Rational>({Q(0), Q(1)}, cantor_nest(p));
    std::vector<Rational> xs{Q(0), Q(1, 6), Q(1, 7), Q(3, 10), Q(1, 2), Q(13, 16), Q(1)};
    for (std::size_t n = 0; n <= 8; ++n) {
      auto f = slow.at(n);
      for (const auto& x : xs) CHECK(fast.value(n, x) == f(x));
      CHECK(fast.integral(n, Q(0), Q(1)) == integral(f, Q(0), Q(1)));
      CHECK(fast.integral(n, Q(1, 10), Q(7, 10)) == integral(f, Q(1, 10), Q(7, 10)));
      CHECK(fast.integral(n, Q(3, 8), Q(5, 8)) == integral(f, Q(3, 8), Q(5, 8)));
    }
  }
}

TEST_CASE("off D_N the partial sums stop at N, reaching it only in the finest gaps") {
  auto p = CantorParams<Rational>::make(0.5);
  auto d = cantor_tietze_family(p);
  auto nest = cantor_nest(p);
  for (std::size_t big_n = 1; big_n <= 8; ++big_n) {
    Rational cap(static_cast<std::int64_t>(big_n));
    auto gaps = complement(nest(big_n));
    for (const auto& g : gaps.components()) {
      Rational x = (g.lo + g.hi) / 2;
      Rational v = d.value(big_n, x);
      CHECK(d.value(big_n + 6, x) == v);
      CHECK(v <= cap);
      // Gaps opened at level N inside a D_{N-1} piece get δ_{N-1} = 1 by the ramp rule.
      bool finest = nest(big_n - 1).contains(x) && !(g.lo == 0) && !(g.hi == 1);
      if (big_n == 1) finest = true;
      CHECK((v == cap) == finest);
    }
  }
}
