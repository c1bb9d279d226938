#include "divergia/ifs.hpp"
#include "divergia/io.hpp"
#include "divergia/jarnik.hpp"

#include "support.hpp"

#include <doctest.h>

#include <random>
#include <string>

using namespace divergia;
using namespace divergia::test;

TEST_CASE("scalars") {
  CHECK(encode(Q(3, 8)) == Json("3/8"));
  CHECK(encode(Q(2)) == Json("2/1"));
  CHECK(decode_scalar<Rational>(Json("3/8")) == Q(3, 8));
  CHECK(decode_scalar<Rational>(Json(5)) == Q(5));
  CHECK(decode_scalar<Rational>(Json(0.25)) == Q(1, 4));
  CHECK(decode_scalar<double>(Json("1/4")) == 0.25);
  CHECK(decode_scalar<double>(Json(0.1)) == 0.1);
  CHECK_THROWS_AS(decode_scalar<Rational>(Json(true)), UsageError);
}

TEST_CASE("interval unions round trip") {
  auto nest = cantor_nest(CantorParams<Rational>::make(0.5, Q(1, 2)));
  for (std::size_t n = 0; n <= 5; ++n) {
    auto a = nest(n);
    auto j = encode(a);
    CHECK(decode_union<Rational>(j) == a);
    CHECK(decode_union<Rational>(Json::parse(j.dump())) == a);
  }
  auto d = cantor_nest(CantorParams<double>::make(0.3))(4);
  CHECK(decode_union<double>(Json::parse(encode(d).dump())) == d);
  CHECK(encode(nest(1)).dump() == R"({"domain":["0/1","1/1"],"components":[["1/8","3/8"],["5/8","7/8"]]})");
}

TEST_CASE("functions round trip") {
  auto f = tietze_family<Rational>({Q(0), Q(1)}, cantor_nest(CantorParams<Rational>::make(0.5))).at(4);
  CHECK(decode_function<Rational>(Json::parse(encode(f).dump())) == f);
  auto z = liouville_family().at(12);
  CHECK(decode_function<double>(Json::parse(encode(z).dump())) == z);
}

TEST_CASE("random unions round trip exactly") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(0, 64);
  for (int t = 0; t < 200; ++t) {
    std::vector<Interval<Rational>> parts;
    for (int k = 0; k < 4; ++k) {
      int a = num(rng), b = num(rng);
      if (a > b) std::swap(a, b);
      parts.push_back({Q(a, 64), Q(b, 64)});
    }
    IntervalUnion<Rational> u({Q(0), Q(1)}, parts);
    CHECK(decode_union<Rational>(Json::parse(encode(u).dump())) == u);
  }
}

TEST_CASE("malformed documents") {
  CHECK_THROWS_AS(decode_union<Rational>(Json::parse(R"({"components": []})")), UsageError);
  CHECK_THROWS_AS(decode_union<Rational>(Json::parse(R"({"domain": [0, 1], "components": [[0]]})")), UsageError);
  CHECK_THROWS_AS(decode_union<Rational>(Json::parse(R"({"domain": [0, 1], "components": [[0.5, 2]]})")), UsageError);
  CHECK_THROWS_AS(decode_function<Rational>(Json::parse(R"({"knots": [[0, 1]]})")), UsageError);
}

TEST_CASE("family descriptions") {
  auto j = describe(jarnik_family(JarnikParams<Rational>::make(0.5)));
  CHECK(j["tag"] == "jarnik");
  CHECK(j["domain"][1] == "1/1");
  CHECK(j["params"]["alpha0"] == "4/1");
}

TEST_CASE("report encodings") {
  auto f = linear_in_n_family<Rational>({Q(0), Q(1)}, Q(1), Q(0));
  auto rep = max_family_check(f, Q(10), 50);
  auto j = encode(rep);
  CHECK(j["thresholds"]["M"] == "10/1");
  CHECK(j["thresholds"]["N_max"] == 50);
  CHECK(j["rows"].size() == 10);
  CHECK(j["rows"][0]["reached_at"] == "not reached by N_max");
  CHECK(j["passed"] == false);
  CHECK(j["monotone"]["monotone"] == true);

  std::vector<Rational> grid{Q(0), Q(1, 2)};
  auto est = divergence_estimate(f, Q(10), 11, grid);
  auto e = encode(est);
  CHECK(e["flagged_count"] == 2);
  CHECK(e["points"][1]["x"] == "1/2");
  CHECK(to_csv(est) == "# M=10/1 N=11 flagged=2/2\nx,value,flagged\n0/1,11/1,1\n1/2,11/1,1\n");
}

TEST_CASE("errors encode their kind") {
  CHECK(encode_error(ParameterError("bad theta"))["error"]["kind"] == "parameter");
  CHECK(encode_error(ConstructionError("nest"))["error"]["message"] == "nest");
  CHECK(encode_error(UsageError("x"))["error"]["kind"] == "usage");
}
