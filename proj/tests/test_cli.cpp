#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "sik/cli.hpp"
#include "sik/ellipsoid.hpp"
#include "sik/io.hpp"

using namespace sik;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run sik_run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  Run r;
  r.code = cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

const char* kZeroMean = R"({"n":3,"orbits":[{"label":"z","period":1.0,"dec":{"n":3,"p":[1,0,0],
  "thetas_over_2pi":[{"real":"0.61803398874989484820458683436563811772"},
  {"real":"0.38196601125010515179541316563436188228"}]},"seed":{"i1":-1,"nu1":1}}]})";

}  // namespace

TEST_CASE("ellipsoid output feeds dichotomy") {
  const auto sys = sik_run({"ellipsoid", "--radii", "1,1.18920711500272"});
  REQUIRE(sys.code == cli::ok);
  const auto dich = sik_run({"dichotomy", "--mbar", "3", "--bound", "1000000"}, sys.out);
  CHECK(dich.code == cli::ok);
  const auto j = parse_json(dich.out);
  CHECK(j["q"] == 2);
  CHECK(j["n"] == 2);
  CHECK(j["window_sum"] == 2);
  CHECK(j["certified"] == true);
  CHECK(j["verdict"] == "consistent with exactly n");
}

TEST_CASE("iterate csv has one row per orbit and iterate") {
  const auto sys = sik_run({"ellipsoid", "--radii", "1,2^(1/4),3^(1/3)"});
  REQUIRE(sys.code == cli::ok);
  const auto csv = sik_run({"iterate", "--max-m", "50", "--format", "csv"}, sys.out);
  REQUIRE(csv.code == cli::ok);
  std::istringstream lines(csv.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "k,m,i,nu");
  const auto parsed = system_from_json(parse_json(sys.out));
  int rows = 0;
  while (std::getline(lines, line)) {
    int k = 0, m = 0, i = 0, nu = 0;
    REQUIRE(std::sscanf(line.c_str(), "%d,%d,%d,%d", &k, &m, &i, &nu) == 4);
    const auto want = parsed[k - 1].iteration().at(m);
    CHECK(i == want.index);
    CHECK(nu == want.nullity);
    ++rows;
  }
  CHECK(rows == 150);
}

TEST_CASE("identity flags a vanishing mean") {
  const auto r = sik_run({"identity", "--format", "text"}, kZeroMean);
  CHECK(r.code == cli::failed);
  CHECK(r.out.find("has mean index 0") != std::string::npos);
  CHECK(r.out.find("identity not applicable") != std::string::npos);
  const auto j = parse_json(sik_run({"identity"}, kZeroMean).out);
  CHECK(j["applicable"] == false);
  CHECK(j["diagnostics"][0]["bounded_range"][0] >= -6);
  CHECK(j["diagnostics"][0]["bounded_range"][1] <= -2);

  const auto good = sik_run({"identity"}, sik_run({"ellipsoid", "--radii", "1,2^(1/4)"}).out);
  CHECK(good.code == cli::ok);
  CHECK(parse_json(good.out)["holds"] == true);
}

TEST_CASE("input errors exit with 2") {
  CHECK(sik_run({}).code == cli::bad_input);
  CHECK(sik_run({"frobnicate"}).code == cli::bad_input);
  CHECK(sik_run({"iterate"}, "{not json").code == cli::bad_input);
  CHECK(sik_run({"iterate"}, R"({"n":2,"orbits":[],"extra":1})").code == cli::bad_input);
  CHECK(sik_run({"iterate", "--system", "/nonexistent.json"}).code == cli::bad_input);
  CHECK(sik_run({"iterate", "--max-m", "0"}, kZeroMean).code == cli::bad_input);
  CHECK(sik_run({"morse"}, kZeroMean).code == cli::bad_input);
  CHECK(sik_run({"morse", "--p-hi", "4"}, kZeroMean).code == cli::bad_input);
  CHECK(sik_run({"ellipsoid", "--radii", "1,2"}).code == cli::bad_input);
  CHECK(sik_run({"ellipsoid", "--radii", "1,x"}).code == cli::bad_input);
  CHECK(sik_run({"iterate", "--format", "xml"}, kZeroMean).code == cli::bad_input);
  const auto r = sik_run({"ellipsoid", "--radii", "1,2"});
  CHECK(r.out.empty());
  CHECK(r.err.find("resonant") != std::string::npos);
  CHECK(sik_run({"--help"}).code == cli::ok);
}

TEST_CASE("reports are deterministic and re-parse") {
  const auto sys = sik_run({"ellipsoid", "--radii", "1,2^(1/4),3^(1/3)"}).out;
  CHECK(sys == sik_run({"ellipsoid", "--radii", "1,2^(1/4),3^(1/3)"}).out);
  const auto one = sik_run({"cij-find", "--bound", "20000", "--max-results", "3", "--threads", "1"}, sys);
  const auto four = sik_run({"cij-find", "--bound", "20000", "--max-results", "3", "--threads", "4"}, sys);
  REQUIRE(one.code == cli::ok);
  CHECK(one.out == four.out);
  const auto found = parse_json(one.out);
  REQUIRE(!found["tuples"].empty());
  const auto tuple = tuple_from_json(found["tuples"][0]);
  CHECK(tuple.N == 2958);
  for (const char* cmd : {"mean-index", "identity", "iterate"}) {
    const auto a = sik_run({cmd}, sys);
    CHECK(a.out == sik_run({cmd}, sys).out);
    CHECK_NOTHROW(parse_json(a.out));
  }
}

TEST_CASE("tuple certificates re-verify") {
  const auto sys_text = sik_run({"ellipsoid", "--radii", "1,2^(1/4)"}).out;
  const auto found = parse_json(sik_run({"cij-find"}, sys_text).out);
  REQUIRE(found["tuples"].size() == 1);
  const auto sys = system_from_json(parse_json(sys_text));
  auto t = tuple_from_json(found["tuples"][0]);
  CHECK(verify_tuple(sys, t).ok());
  // an unsound certificate is rejected by the library and the command alike
  t.m[1] += 1;
  CHECK(!verify_tuple(sys, t).ok());
  CHECK_THROWS_AS(tuple_from_json(parse_json(R"({"N":1,"m":[0],"m_bar":3})")), InputError);
  CHECK_THROWS_AS(tuple_from_json(parse_json(R"({"N":1,"m":[2],"bogus":3})")), InputError);
}

TEST_CASE("seed fixtures round trip") {
  const auto seeds = sik_run({"ellipsoid", "--radii", "1,2^(1/4)", "--seeds-only"});
  REQUIRE(seeds.code == cli::ok);
  const auto j = parse_json(seeds.out);
  CHECK(j["seeds"].size() == 2);
  const auto oracle_sys = system_from_json(parse_json(sik_run({"ellipsoid", "--radii", "1,2^(1/4)"}).out));
  const auto fixed = sik_run({"ellipsoid", "--radii", "1,2^(1/4)", "--seed-fixture", "-"}, seeds.out);
  REQUIRE(fixed.code == cli::ok);
  const auto fixed_sys = system_from_json(parse_json(fixed.out));
  for (std::size_t k = 0; k < 2; ++k) CHECK(fixed_sys[k].seed.i1 == oracle_sys[k].seed.i1);
  CHECK(sik_run({"ellipsoid", "--radii", "1,3^(1/3)", "--seed-fixture", "-"}, seeds.out).code == cli::bad_input);
  CHECK(sik_run({"ellipsoid", "--radii", "1,2^(1/4)", "--seed-fixture", "-"}, "[3, 4]").code == cli::bad_input);
}

TEST_CASE("decompose a materialized block list") {
  const char* blocks = R"({"blocks":[{"type":"N1","lambda":1,"b":1},{"type":"R","theta":{"rational":[1,5]}},
    {"type":"D","lambda":2}]})";
  const auto from_blocks = parse_json(sik_run({"decompose"}, blocks).out);
  CHECK(from_blocks["decomposition"]["p"] == Json::array({1, 0, 0}));
  CHECK(from_blocks["decomposition"]["hyp_dim"] == 2);

  std::vector<BasicBlock> bs;
  const auto doc = parse_json(blocks);
  for (const auto& b : doc["blocks"]) bs.push_back(block_from_json(b));
  const auto matrix = matrix_to_json(materialize(bs)).dump();
  const auto r = sik_run({"decompose"}, matrix);
  REQUIRE(r.code == cli::ok);
  const auto j = parse_json(r.out);
  CHECK(j["decomposition"]["p"] == Json::array({1, 0, 0}));
  CHECK(j["decomposition"]["thetas_over_2pi"].size() == 1);
  CHECK(j["classification"]["class"] == "mixed");
  int total = 0;
  for (const auto& fm : j["spectrum"]) total += fm["multiplicity"].get<int>();
  CHECK(total == 6);
  CHECK(sik_run({"decompose"}, R"({"n":1,"rows":[[2,0],[0,2]]})").code == cli::bad_input);
}

TEST_CASE("oracle command agrees with the library") {
  const char* block = R"({"type":"R","theta":{"rational":[1,3]}})";
  const auto path = generator_path_for(block_from_json(parse_json(block)));
  for (int m = 1; m <= 4; ++m) {
    const auto r = sik_run({"oracle", "--m", std::to_string(m), "--omega", "0.25"}, block);
    REQUIRE(r.code == cli::ok);
    CHECK(parse_json(r.out)["index"] == omega_index(path, m, std::polar(1.0, std::numbers::pi / 2)));
  }
  const auto sweep = parse_json(sik_run({"oracle", "--m", "4", "--sweep"}, block).out);
  for (int m = 1; m <= 4; ++m) CHECK(sweep["rows"][m - 1]["index"] == omega_index(path, m, {1.0, 0.0}));
  CHECK(sik_run({"oracle"}, R"({"n":1})").code == cli::bad_input);
}

TEST_CASE("committed seed fixtures match the oracle") {
  for (const char* name : {"n2", "n3", "n4"}) {
    const std::string path = std::string(SIK_SOURCE_DIR "/data/ellipsoid_seeds/") + name + ".json";
    std::ifstream in(path);
    REQUIRE(in);
    const auto doc = Json::parse(in);
    std::string radii;
    for (const auto& r : doc["radii"]) radii += (radii.empty() ? "" : ",") + r.get<std::string>();
    const auto seeds = sik_run({"ellipsoid", "--radii", radii, "--seeds-only"});
    REQUIRE(seeds.code == cli::ok);
    CHECK(parse_json(seeds.out) == doc);
  }
}
