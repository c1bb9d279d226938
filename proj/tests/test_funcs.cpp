#include "divergia/error.hpp"
#include "divergia/funcs.hpp"
#include "divergia/ifs.hpp"

#include "support.hpp"

#include <doctest.h>

using namespace divergia;
using namespace divergia::test;

namespace {

using PL = PiecewiseLinear<Rational>;

PL ramp01() { return PL({{Q(0), Q(0)}, {Q(1), Q(2)}}); }

IntervalUnion<Rational> level_one() { return QU({{Q(1, 8), Q(3, 8)}, {Q(5, 8), Q(7, 8)}}); }

FunctionFamily<Rational> constant_family(std::function<Rational(std::size_t)> level) {
  FunctionFamily<Rational>::Ops ops;
  ops.materialize = [level](std::size_t n) { return PL::constant({Q(0), Q(1)}, level(n)); };
  return FunctionFamily<Rational>({Q(0), Q(1)}, "constant", nlohmann::ordered_json::object(), ops);
}

}  // namespace

TEST_CASE("knots must increase") {
  CHECK_THROWS_AS(PL({{Q(0), Q(0)}}), UsageError);
  CHECK_THROWS_AS(PL({{Q(0), Q(0)}, {Q(0), Q(1)}}), UsageError);
  CHECK_THROWS_AS(PL({{Q(1), Q(0)}, {Q(0), Q(1)}}), UsageError);
}

TEST_CASE("eval examples") {
  CHECK(eval(ramp01(), Q(1, 2)) == Q(1));
  CHECK(eval(PL::constant({Q(0), Q(1)}, Q(7, 3)), Q(1, 5)) == Q(7, 3));
  auto delta0 = bump_from_sets(IntervalUnion<Rational>::whole({Q(0), Q(1)}), level_one());
  CHECK(eval(delta0, Q(1, 4)) == Q(1));
  CHECK_THROWS_AS(eval(ramp01(), Q(2)), UsageError);
}

TEST_CASE("add and scale") {
  Interval<Rational> dom{Q(0), Q(1)};
  CHECK(add(PL::constant(dom, Q(1)), PL::constant(dom, Q(2))) == PL::constant(dom, Q(3)));
  CHECK(add(ramp01(), PL::constant(dom, Q(0))) == ramp01());
  CHECK(eval(scale(ramp01(), Q(3)), Q(1, 3)) == Q(2));
  auto g = PL({{Q(0), Q(1)}, {Q(1, 3), Q(0)}, {Q(1), Q(1)}});
  auto s = add(ramp01(), g);
  CHECK(s.knots().size() == 3);
  CHECK(eval(s, Q(1, 3)) == Q(2, 3));
  CHECK_THROWS_AS(add(ramp01(), PL::constant({Q(0), Q(2)}, Q(1))), UsageError);
}

TEST_CASE("subtract returns g - f") {
  auto d = subtract(ramp01(), PL::constant({Q(0), Q(1)}, Q(1)));
  CHECK(eval(d, Q(0)) == Q(1));
  CHECK(eval(d, Q(1)) == Q(-1));
}

TEST_CASE("integral examples") {
  Interval<Rational> dom{Q(0), Q(1)};
  CHECK(integral(PL::constant(dom, Q(3)), Q(1, 4), Q(3, 4)) == Q(3, 2));
  CHECK(integral(PL({{Q(0), Q(0)}, {Q(1), Q(1)}}), Q(0), Q(1)) == Q(1, 2));
  auto g = PL({{Q(0), Q(1)}, {Q(1, 3), Q(0)}, {Q(1), Q(1)}});
  CHECK(integral(g, Q(1, 6), Q(1, 2)) == integral(g, Q(1, 6), Q(1, 3)) + integral(g, Q(1, 3), Q(1, 2)));
  CHECK_THROWS_AS(integral(g, Q(1, 2), Q(1, 2)), UsageError);
}

TEST_CASE("multiply interpolates with a reported bound") {
  auto f = ramp01();
  auto r = multiply(f, f);  // 4x^2
  CHECK(eval(r.function, Q(1, 2)) == Q(1));
  // Each refined half carries |Δf·Δg|/4 = 1/4, attained at x = 1/4.
  CHECK(r.error_bound == Q(1, 4));
  Rational worst = abs(eval(r.function, Q(1, 4)) - Q(4) * Q(1, 16));
  CHECK(worst == r.error_bound);
  auto c = multiply(f, PL::constant({Q(0), Q(1)}, Q(2)));
  CHECK(c.error_bound == Q(0));
  CHECK(eval(c.function, Q(1, 3)) == Q(4, 3));
}

TEST_CASE("bump examples") {
  auto inner = QU({{R("0.4"), R("0.6")}});
  auto outer = QU({{R("0.3"), R("0.7")}});
  auto b = bump_from_sets(outer, inner);
  CHECK(eval(b, R("0.5")) == Q(1));
  CHECK(eval(b, R("0.3")) == Q(0));
  CHECK(eval(b, R("0.35")) == Q(1, 2));
  CHECK(eval(b, R("0.9")) == Q(0));

  auto full = bump_from_sets(IntervalUnion<Rational>::whole({Q(0), Q(1)}), level_one());
  CHECK(eval(full, Q(0)) == Q(1));
  CHECK(eval(full, Q(1, 2)) == Q(1));
  CHECK(eval(full, Q(1)) == Q(1));
  CHECK(integral(full, Q(0), Q(1)) == Q(1));
}

TEST_CASE("bump fills gaps between inner pieces and zeroes empty outer pieces") {
  auto outer = QU({{Q(1, 10), Q(5, 10)}, {Q(6, 10), Q(8, 10)}});
  auto inner = QU({{Q(2, 10), Q(25, 100)}, {Q(3, 10), Q(4, 10)}});
  auto b = bump_from_sets(outer, inner);
  CHECK(eval(b, Q(27, 100)) == Q(1));
  CHECK(eval(b, Q(15, 100)) == Q(1, 2));
  CHECK(eval(b, Q(45, 100)) == Q(1, 2));
  CHECK(eval(b, Q(7, 10)) == Q(0));
}

TEST_CASE("bump precondition") {
  CHECK_THROWS_AS(bump_from_sets(QU({{R("0.3"), R("0.7")}}), QU({{R("0.3"), R("0.5")}})), ConstructionError);
  CHECK_THROWS_AS(bump_from_sets(QU({{R("0.3"), R("0.7")}}), QU({{R("0.6"), R("0.8")}})), ConstructionError);
  // A side on the domain boundary is held at 1.
  auto b = bump_from_sets(QU({{Q(0), R("0.5")}}), QU({{Q(0), R("0.25")}}));
  CHECK(eval(b, Q(0)) == Q(1));
  CHECK(eval(b, R("0.375")) == Q(1, 2));
}

TEST_CASE("tietze family on the quarter-ratio nest") {
  auto p = CantorParams<Rational>::make(0.5, Q(1, 2));
  auto nest = cantor_nest(p);
  auto d = tietze_family<Rational>({Q(0), Q(1)}, nest);
  for (std::size_t n = 0; n <= 8; ++n) {
    CHECK(d.value(n, Q(1, 6)) == Rational(static_cast<std::int64_t>(n + 1)));
    CHECK(d.value(n, Q(1, 2)) == d.value(0, Q(1, 2)));
  }
  // δ_0 = bump(D_0, D_1) is held at 1 up to both domain endpoints.
  CHECK(d.value(0, Q(1, 2)) == Q(1));
}

TEST_CASE("tietze family on a constant nest") {
  Interval<Rational> dom{Q(0), Q(1)};
  auto d = tietze_family<Rational>(dom, [dom](std::size_t) { return IntervalUnion<Rational>::whole(dom); });
  CHECK(d.at(4) == PL::constant(dom, Q(5)));
}

TEST_CASE("tietze family names the level of a nesting violation") {
  Interval<Rational> dom{Q(0), Q(1)};
  auto bad = [dom](std::size_t n) {
    if (n < 2) return IntervalUnion<Rational>::whole(dom);
    return QU({{Q(1, 4), Q(3, 4)}});
  };
  auto d = tietze_family<Rational>(dom, bad);
  CHECK(d.at(1).min_value() == Q(2));
  CHECK(d.at(1).max_value() == Q(2));
  CHECK_THROWS_WITH_AS(d.at(3), doctest::Contains("level 2"), ConstructionError);
}

TEST_CASE("tietze partial sums are structural") {
  auto nest = cantor_nest(CantorParams<Rational>::make(0.5));
  auto d = tietze_family<Rational>({Q(0), Q(1)}, nest);
  for (std::size_t n = 0; n < 5; ++n) {
    CHECK(d.at(n + 1) == add(d.at(n), bump_from_sets(nest(n + 1), nest(n + 2))));
  }
}

TEST_CASE("monotone check examples") {
  auto nest = cantor_nest(CantorParams<Rational>::make(0.5));
  auto d = tietze_family<Rational>({Q(0), Q(1)}, nest);
  CHECK(monotone_check(d, 10).monotone);

  auto down = monotone_check(constant_family([](std::size_t n) { return Rational(-static_cast<std::int64_t>(n)); }), 5);
  CHECK_FALSE(down.monotone);
  REQUIRE(down.first_violation);
  CHECK(down.first_violation->n == 1);
  CHECK(down.first_violation->drop == Q(-1));

  CHECK(monotone_check(constant_family([](std::size_t) { return Q(3); }), 5).monotone);
  CHECK_THROWS_AS(monotone_check(d, 1), UsageError);
}

TEST_CASE("linear family") {
  auto f = linear_in_n_family<Rational>({Q(0), Q(1)}, Q(1), Q(0));
  CHECK(f.value(7, Q(1, 3)) == Q(7));
  CHECK(f.integral(7, Q(0), Q(1, 2)) == Q(7, 2));
  CHECK(f.at(3) == PL::constant({Q(0), Q(1)}, Q(3)));
  CHECK(monotone_check(f, 20).monotone);
}

TEST_CASE("partial sum family") {
  Interval<Rational> dom{Q(0), Q(1)};
  auto f = partial_sum_family<Rational>(dom, "sum", nlohmann::ordered_json::object(), 1,
                                        [dom](std::size_t q) { return PL::constant(dom, Rational(static_cast<std::int64_t>(q))); });
  CHECK(f.at(0) == PL::constant(dom, Q(0)));
  CHECK(f.value(4, Q(1, 2)) == Q(10));
  CHECK(f.increment_lower_bound(4) == Q(5));
}
