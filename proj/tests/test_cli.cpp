#include "cli.hpp"

#include "divergia/io.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace divergia;
using namespace divergia::test;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args, const char* backend = "float") {
  ::setenv("DIVERGIA_BACKEND", backend, 1);
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("cantor prints the dyadic levels") {
  auto r = call({"cantor", "--theta", "0.5", "--eps", "0.5", "--levels", "3", "--format", "json"}, "exact");
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["config"]["levels"] == "3");
  auto levels = j["result"]["levels"];
  REQUIRE(levels.size() == 3);
  CHECK(decode_union<Rational>(levels[0]["set"]) == QU({{Q(1, 8), Q(3, 8)}, {Q(5, 8), Q(7, 8)}}));
  CHECK(decode_union<Rational>(levels[1]["set"]) ==
        QU({{Q(5, 32), Q(7, 32)}, {Q(9, 32), Q(11, 32)}, {Q(21, 32), Q(23, 32)}, {Q(25, 32), Q(27, 32)}}));
  auto d3 = decode_union<Rational>(levels[2]["set"]);
  REQUIRE(d3.size() == 8);
  int k = 0;
  for (int a : {21, 25, 37, 41, 85, 89, 101, 105}) {
    CHECK(d3.components()[static_cast<std::size_t>(k)] == Interval<Rational>{Q(a, 128), Q(a + 2, 128)});
    ++k;
  }
}

TEST_CASE("cantor csv") {
  auto r = call({"cantor", "--theta", "0.5", "--eps", "0.5", "--levels", "1", "--format", "csv"}, "exact");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("# {", 0) == 0);
  CHECK(r.out.find("1,1/8,3/8\n1,5/8,7/8\n") != std::string::npos);
}

TEST_CASE("Moran dimension from the command line") {
  auto r = call({"dim", "--moran", "0.25,0.25"});
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["result"]["dimension"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("box dimension of a written set") {
  auto path = std::filesystem::temp_directory_path() / "divergia_cli_level.json";
  auto w = call({"cantor", "--theta", "0.5", "--levels", "8", "-o", path.string()}, "exact");
  REQUIRE(w.code == 0);
  CHECK(w.out.empty());
  std::ifstream in(path);
  auto doc = Json::parse(in);
  auto set_path = std::filesystem::temp_directory_path() / "divergia_cli_set.json";
  std::ofstream(set_path) << doc["result"]["levels"][7]["set"].dump();
  auto r = call({"dim", "--input", set_path.string(), "--scales", "1/16,1/64,1/256,1/1024,1/4096"}, "exact");
  REQUIRE(r.code == 0);
  CHECK(Json::parse(r.out)["result"]["estimate"].get<double>() == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("usage errors exit 2") {
  auto r = call({"cantor", "--bogus"});
  CHECK(r.code == 2);
  CHECK(r.out.empty());
  CHECK_FALSE(r.err.empty());
  CHECK(call({}).code == 2);
  auto bad = call({"cantor", "--theta", "1.5"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("theta") != std::string::npos);
  CHECK(call({"check", "--family", "nope"}).code == 2);
  CHECK(call({"liouville"}, "exact").code == 2);
  CHECK(call({"qam", "mean", "--gen", "log", "--tuple", "-1,2"}).code == 2);
}

TEST_CASE("library errors exit 1 with error JSON") {
  auto r = call({"jarnik", "--theta", "0.5", "--n", "150", "--q-max", "100"});
  CHECK(r.code == 1);
  auto j = Json::parse(r.out);
  CHECK(j["error"]["kind"] == "usage");
  CHECK_FALSE(j["error"]["message"].get<std::string>().empty());
}

TEST_CASE("outputs are deterministic") {
  for (std::vector<std::string> args : {std::vector<std::string>{"qam", "compare", "--f", "log", "--g", "power:1"},
                                        std::vector<std::string>{"iset", "--family", "jarnik", "--points", "11"},
                                        std::vector<std::string>{"check", "--family", "anydh", "--theta", "0.5"}}) {
    auto a = call(args);
    auto b = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("emitted sets and functions re-parse") {
  auto r = call({"jarnik", "--theta", "0.5", "--n", "4"}, "exact");
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  auto f = decode_function<Rational>(j["result"]["function"]);
  CHECK(encode(f) == j["result"]["function"]);
  auto c = call({"cantor", "--theta", "0.3", "--levels", "2"});
  auto u = decode_union<double>(Json::parse(c.out)["result"]["levels"][1]["set"]);
  CHECK(encode(u) == Json::parse(c.out)["result"]["levels"][1]["set"]);
}

TEST_CASE("check and iset documents") {
  auto r = call({"check", "--family", "anydh", "--theta", "0.5", "--M", "10", "--N", "30"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["config"]["M"] == "10");
  CHECK(j["result"]["passed"] == true);
  CHECK(j["result"]["rows"].size() == 10);

  auto c = call({"check", "--family", "cantor-tietze", "--theta", "0.5"}, "exact");
  REQUIRE(c.code == 0);
  auto cj = Json::parse(c.out);
  CHECK(cj["result"]["passed"] == false);
  CHECK(cj["result"]["rows"][4]["reached_at"] == "not reached by N_max");

  auto s = call({"iset", "--family", "linear", "--N", "11", "--points", "3", "--max-denominator", "1"});
  REQUIRE(s.code == 0);
  CHECK(s.out.find("flagged=3/3") != std::string::npos);
}

TEST_CASE("qam subcommands") {
  auto m = call({"qam", "mean", "--gen", "power:2", "--tuple", "1,2"});
  REQUIRE(m.code == 0);
  CHECK(Json::parse(m.out)["result"]["mean"].get<double>() == doctest::Approx(1.5811388300841898));
  auto x = call({"qam", "maximal", "--family", "exp:n", "--N", "200"});
  REQUIRE(x.code == 0);
  auto xj = Json::parse(x.out)["result"];
  CHECK(xj["ratio_condition"]["tag"] == "ratio->0 (QA-maximal indicator)");
  CHECK(xj["integral_check"]["passed"] == true);
  auto c = call({"qam", "compare", "--f", "log", "--g", "power:1"});
  REQUIRE(c.code == 0);
  CHECK(Json::parse(c.out)["result"]["verdict"] == "QA_F <= QA_G");
}
