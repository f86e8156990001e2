#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "rankagg/distance.hpp"
#include "rankagg/io.hpp"

using namespace rankagg;
using rankagg::cli::Json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run rankaggRun(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "rankagg_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string firstLine(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST_CASE("gen is deterministic for a seed") {
  const auto a = rankaggRun({"--seed", "11", "gen", "7", "5"});
  const auto b = rankaggRun({"--seed", "11", "gen", "7", "5"});
  const auto c = rankaggRun({"--seed", "12", "gen", "7", "5"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  const auto P = parseInstance(a.out);
  CHECK(P.n == 7);
  CHECK(P.m() == 5);
}

TEST_CASE("gen without a seed reports the one it drew") {
  const auto r = rankaggRun({"gen", "3", "2"});
  CHECK(r.code == 0);
  CHECK(r.err.rfind("seed: ", 0) == 0);
}

TEST_CASE("planted gen") {
  const auto path = scratch("planted.txt");
  SUBCASE("zero moves gives copies of the center") {
    REQUIRE(rankaggRun({"--seed", "5", "gen", "9", "4", "--model", "planted", "--moves", "0", "-o", path.string()}).code == 0);
    const auto P = readInstanceFile(path.string());
    const auto center = parsePermutation(firstLine(path.string() + ".center"));
    for (const auto& p : P.perms) CHECK(p == center);
  }
  SUBCASE("one move is within one Ulam move of the center") {
    REQUIRE(rankaggRun({"--seed", "6", "gen", "12", "20", "--model", "planted", "--moves", "1", "-o", path.string()}).code == 0);
    const auto P = readInstanceFile(path.string());
    const auto center = parsePermutation(firstLine(path.string() + ".center"));
    for (const auto& p : P.perms) CHECK(ulam(p, center).moves <= 1);
  }
}

TEST_CASE("bad arguments exit 1") {
  CHECK(rankaggRun({"gen", "0", "3"}).code == cli::kInputError);
  CHECK(rankaggRun({"frobnicate"}).code == cli::kInputError);
  CHECK(rankaggRun({"--metric", "nope", "dist", scratch("planted.txt").string()}).code == cli::kInputError);
}

TEST_CASE("malformed instance reports line and column") {
  const auto path = scratch("bad.txt");
  std::ofstream(path) << "3 2\n1 2 3\n1 2 x\n";
  const auto r = rankaggRun({"aggregate", path.string()});
  CHECK(r.code == cli::kInputError);
  CHECK(r.err.find(path.string() + ":3:") != std::string::npos);
}

TEST_CASE("aggregate on identical members matches the optimum") {
  const auto path = scratch("copies.txt");
  REQUIRE(rankaggRun({"--seed", "2", "gen", "6", "8", "--model", "planted", "--moves", "0", "-o", path.string()}).code == 0);
  for (const std::string metric : {"hamming", "footrule", "kendall", "ulam"}) {
    const auto r = rankaggRun({"--seed", "4", "--metric", metric, "aggregate", path.string(), "--verify"});
    REQUIRE(r.code == 0);
    const auto rep = cli::reportFromJson(Json::parse(r.out));
    REQUIRE(rep.ratio.has_value());
    CHECK(*rep.ratio == 1.0);
    CHECK(rep.cost == 0.0);
  }
}

TEST_CASE("run report JSON round-trips") {
  const auto path = scratch("round.txt");
  REQUIRE(rankaggRun({"--seed", "9", "gen", "16", "10", "-o", path.string()}).code == 0);
  const auto r = rankaggRun({"--seed", "1", "--metric", "hamming", "aggregate", path.string(), "--mpc"});
  REQUIRE(r.code == 0);
  const auto j = Json::parse(r.out);
  const auto rep = cli::reportFromJson(j);
  CHECK(rep.trace.has_value());
  CHECK(rep.n == 16);
  CHECK(cli::toJson(rep) == j);
  CHECK(cli::reportFromJson(cli::toJson(rep)) == rep);
}

TEST_CASE("mpc reports a cap violation with exit 2") {
  const auto path = scratch("cap.txt");
  REQUIRE(rankaggRun({"--seed", "3", "gen", "16", "5", "-o", path.string()}).code == 0);
  const auto r = rankaggRun({"--kappa", "1", "mpc", path.string(), "--algorithm", "ulam-reconstruct"});
  CHECK(r.code == cli::kCapViolation);
}

TEST_CASE("verify runs a named suite") {
  const auto r = rankaggRun({"verify", "distances"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS distances") != std::string::npos);
  CHECK(rankaggRun({"verify", "no-such-suite"}).code == cli::kInputError);
}

TEST_CASE("hamming aggregate ratio on small uniform instances") {
  const auto path = scratch("uniform6.txt");
  int within = 0;
  for (int seed = 1; seed <= 100; ++seed) {
    const auto s = std::to_string(seed);
    REQUIRE(rankaggRun({"--seed", s, "gen", "6", "10", "-o", path.string()}).code == 0);
    const auto r = rankaggRun({"--seed", s, "--metric", "hamming", "aggregate", path.string(), "--verify"});
    REQUIRE(r.code == 0);
    const auto rep = cli::reportFromJson(Json::parse(r.out));
    REQUIRE(rep.ratio.has_value());
    CHECK(*rep.ratio >= 1 - 1e-9);
    if (*rep.ratio <= 2.0) ++within;
  }
  CHECK(within >= 90);
}
