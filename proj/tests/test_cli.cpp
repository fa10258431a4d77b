#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "catvar/cli.hpp"
#include "catvar/errors.hpp"
#include "catvar/io.hpp"

using namespace catvar;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = CATVAR_FIXTURE_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const char* name) { return (kFixtures / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "catvar_cli_test";
  fs::create_directories(d);
  return d;
}

// Exit status of the built binary, output discarded.
int binary_status(const std::string& args) {
  const std::string cmd = std::string(CATVAR_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int s = std::system(cmd.c_str());
  return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

}  // namespace

TEST_CASE("lambda0 report") {
  const Outcome o = call({"lambda0"});
  REQUIRE(o.code == cli::kOk);
  const io::Json j = io::Json::parse(o.out);
  CHECK(j["command"] == "lambda0");
  CHECK(j["lambda0"].get<double>() > 0.83);
  CHECK(j["lambda0"].get<double>() < 0.84);
  CHECK(j["residual_lambdanot"].get<double>() <= 1e-12);
  CHECK(j["residual_tanh"].get<double>() <= 1e-10);
  CHECK(j.contains("t_star"));
  CHECK(j["tolerances"].contains("residual"));
}

TEST_CASE("catenoid and ms commands") {
  const Outcome c = call({"catenoid", "--scale", "1", "--offset", "0"});
  REQUIRE(c.code == 0);
  const io::Json j = io::Json::parse(c.out);
  CHECK(j["area"].get<double>() == doctest::Approx(3.141592653589793 * std::sinh(2.0) + 2 * 3.141592653589793));
  const Outcome s = call({"catenoid", "--sweep", "0.5:2:4", "--format", "csv"});
  REQUIRE(s.code == 0);
  CHECK(s.out.rfind("scale,offset,area,boundary_length,flux\n", 0) == 0);
  CHECK(std::count(s.out.begin(), s.out.end(), '\n') == 5);
  const Outcome m = call({"ms", "--apex", "0.5", "--grid", "mesh=1024"});
  REQUIRE(m.code == 0);
  CHECK(std::abs(io::Json::parse(m.out)["mu1"].get<double>()) < 1e-4);
}

TEST_CASE("threshold sweep csv") {
  const Outcome o = call({"threshold", "--sweep", "2:40:5", "--format", "csv", "--grid", "mesh=1024"});
  REQUIRE(o.code == cli::kOk);
  CHECK(o.out.rfind("L_minus,F,lambda,offset,mu1_residual\n", 0) == 0);
  CHECK(std::count(o.out.begin(), o.out.end(), '\n') == 6);
  const Outcome t = call({"threshold", "--lower-length", "8", "--upper-length", "20"});
  REQUIRE(t.code == 0);
  const io::Json j = io::Json::parse(t.out);
  CHECK(j["solution_count"] == 2);
  CHECK(j["solutions"][0]["mu1"].get<double>() * j["solutions"][1]["mu1"].get<double>() < 0.0);
}

TEST_CASE("annulus and oval reports") {
  const Outcome a = call({"annulus", "--catenoid", "1", "--slab", "-0.5:0.5"});
  REQUIRE(a.code == 0);
  const io::Json j = io::Json::parse(a.out);
  CHECK(j["equality_flag"] == true);
  CHECK(std::abs(j["area_gap"].get<double>()) <= 1e-7 * j["area_catenoid"].get<double>());
  const Outcome c = call({"annulus", "--random", "--seed", "3", "--format", "csv"});
  REQUIRE(c.code == 0);
  CHECK(c.out.rfind("t,height,length,second_derivative,slack\n", 0) == 0);
  const Outcome o = call({"oval", "--ellipse", "1:1"});
  REQUIRE(o.code == 0);
  CHECK(std::abs(io::Json::parse(o.out)["functional"].get<double>() - 1.0) < 1e-9);
  const Outcome p = call({"oval", "--input", fixture("ellipse_points.json")});
  REQUIRE(p.code == 0);
}

TEST_CASE("byte-identical output for fixed config and seed") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"annulus", "--random", "--seed", "42", "--slab", "-0.3:0.4"},
           {"annulus", "--random", "--projected", "--seed", "7"},
           {"threshold", "--sweep", "1:30:4", "--grid", "mesh=512"},
           {"oval", "--ellipse", "3:1"}}) {
    const Outcome a = call(args);
    const Outcome b = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }
  CHECK(call({"annulus", "--random", "--seed", "1"}).out != call({"annulus", "--random", "--seed", "2"}).out);
}

TEST_CASE("data written by --data-output reproduces the run") {
  const fs::path data = scratch_dir() / "data.json";
  const Outcome a = call({"annulus", "--random", "--seed", "11", "--data-output", data.string()});
  REQUIRE(a.code == 0);
  const Outcome b = call({"annulus", "--input", data.string(), "--seed", "11"});
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("--output honours CATVAR_OUTPUT_DIR") {
  const fs::path dir = scratch_dir();
  fs::remove(dir / "l0.json");
  setenv("CATVAR_OUTPUT_DIR", dir.c_str(), 1);
  const Outcome o = call({"lambda0", "--output", "l0.json"});
  unsetenv("CATVAR_OUTPUT_DIR");
  REQUIRE(o.code == 0);
  CHECK(o.out.empty());
  CHECK(slurp(dir / "l0.json") == call({"lambda0"}).out);
}

TEST_CASE("exit code contract: bad input") {
  for (const char* f : {"malformed.json", "bad_schema.json", "open_period.json", "bad_radii.json",
                        "missing.json"}) {
    const Outcome o = call({"annulus", "--input", fixture(f)});
    CHECK_MESSAGE(o.code == cli::kBadInput, f);
    const io::Json e = io::Json::parse(o.err);
    CHECK(e["exit_code"] == cli::kBadInput);
  }
  const Outcome open = call({"annulus", "--input", fixture("open_period.json")});
  CHECK(io::Json::parse(open.err).contains("residual"));
  const Outcome br = call({"annulus", "--input", fixture("branch_point.json"), "--grid", "levels=65"});
  CHECK(br.code == cli::kBadInput);
  CHECK(io::Json::parse(br.err).contains("min_metric"));
  CHECK(call({"oval", "--input", fixture("degenerate_curve.json")}).code == cli::kBadInput);
  CHECK(call({"catenoid", "--scale", "-1"}).code == cli::kBadInput);
}

TEST_CASE("exit code contract: bad configuration") {
  CHECK(call({"annulus", "--catenoid", "1", "--tol", "bogus=1"}).code == cli::kBadConfig);
  CHECK(call({"annulus", "--catenoid", "1", "--tol", "period=-1"}).code == cli::kBadConfig);
  CHECK(call({"annulus", "--catenoid", "1", "--grid", "levels=2"}).code == cli::kBadConfig);
  CHECK(call({"annulus", "--catenoid", "1", "--grid", "levels"}).code == cli::kBadConfig);
  CHECK(call({"oval", "--ellipse", "2:1", "--sweep", "1:2:3"}).code == cli::kBadConfig);
  CHECK(call({"oval"}).code == cli::kBadConfig);
  CHECK(call({"annulus"}).code == cli::kBadConfig);
  CHECK(call({"nonsense"}).code == cli::kBadConfig);
  CHECK(call({"lambda0", "--frobnicate"}).code == cli::kBadConfig);
  CHECK(call({"threshold"}).code == cli::kBadConfig);
  CHECK(call({"lambda0", "--output", "/nonexistent_dir_catvar/x.json"}).code == cli::kBadConfig);
}

TEST_CASE("exit code contract: numerical failure") {
  const Outcome o = call({"oval", "--ellipse", "6:1", "--grid", "start_nodes=32", "--grid", "max_nodes=64",
                          "--tol", "converge=1e-15"});
  CHECK(o.code == cli::kNumerical);
  CHECK(io::Json::parse(o.err).contains("residual"));
}

TEST_CASE("built binary uses the same contract") {
  CHECK(binary_status("lambda0") == 0);
  CHECK(binary_status("--help") == 0);
  CHECK(binary_status("annulus --input " + fixture("malformed.json")) == cli::kBadInput);
  CHECK(binary_status("annulus --catenoid 1 --tol bogus=1") == cli::kBadConfig);
  CHECK(binary_status("oval --ellipse 6:1 --grid start_nodes=32 --grid max_nodes=64 --tol converge=1e-15") ==
        cli::kNumerical);
}
