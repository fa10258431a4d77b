#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "catvar/errors.hpp"
#include "catvar/io.hpp"

using namespace catvar;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = CATVAR_FIXTURE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / "catvar_io_test";
  fs::create_directories(d);
  return d / name;
}

}  // namespace

TEST_CASE("Weierstrass data round-trips exactly through JSON text") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 25; ++i) {
    const WeierstrassData d = i % 2 ? random_adapted_data(rng, {}) : random_projected_data(rng, {});
    const std::string text = io::to_json(d).dump(2);
    const WeierstrassData back = io::weierstrass_from_json(io::Json::parse(text));
    CHECK(back.g == d.g);
    CHECK(back.h == d.h);
    CHECK(back.r_inner == d.r_inner);
    CHECK(back.r_outer == d.r_outer);
    // Second trip is textually identical.
    CHECK(io::to_json(back).dump(2) == text);
  }
}

TEST_CASE("schema violations raise InputError") {
  const io::Json ok = io::to_json(catenoid_data(1.0, 0.5, 2.0));
  io::Json a = ok;
  a["version"] = 2;
  CHECK_THROWS_AS(io::weierstrass_from_json(a), InputError);
  io::Json b = ok;
  b.erase("h");
  CHECK_THROWS_AS(io::weierstrass_from_json(b), InputError);
  io::Json c = ok;
  c["g"] = io::Json::array({io::Json::array({1, 1.0})});
  CHECK_THROWS_AS(io::weierstrass_from_json(c), InputError);
  io::Json d = ok;
  d["g"] = io::Json::array({io::Json::array({1, 1.0, 0.0}), io::Json::array({1, 2.0, 0.0})});
  CHECK_THROWS_AS(io::weierstrass_from_json(d), InputError);
  io::Json e = ok;
  e["r_outer"] = 0.1;
  CHECK_THROWS_AS(io::weierstrass_from_json(e), InputError);
  CHECK_THROWS_AS(io::weierstrass_from_json(io::Json::array()), InputError);
}

TEST_CASE("files: malformed, missing, valid") {
  CHECK_THROWS_AS(io::read_json_file(kFixtures / "malformed.json"), InputError);
  CHECK_THROWS_AS(io::read_json_file(kFixtures / "does_not_exist.json"), InputError);
  CHECK_THROWS_AS(io::weierstrass_from_json(io::read_json_file(kFixtures / "bad_schema.json")),
                  InputError);
  const WeierstrassData d = io::weierstrass_from_json(io::read_json_file(kFixtures / "catenoid.json"));
  CHECK(d.height_adapted());
  CHECK(d.r_inner == std::exp(-1.0));
}

TEST_CASE("curves from JSON") {
  const ClosedCurve e = io::curve_from_json(io::read_json_file(kFixtures / "ellipse.json"));
  CHECK(e.size() == 256);
  const ClosedCurve p = io::curve_from_json(io::read_json_file(kFixtures / "ellipse_points.json"));
  CHECK(p.size() == 128);
  CHECK(std::abs(p.length() - e.length()) < 1e-9);
  CHECK_THROWS_AS(io::curve_from_json(io::read_json_file(kFixtures / "degenerate_curve.json")),
                  PreconditionError);
  CHECK_THROWS_AS(io::curve_from_json(io::Json{{"points", {{1, 2, 3, 4}}}}), InputError);
  CHECK_THROWS_AS(io::curve_from_json(io::Json{{"ellipse", {1}}}), InputError);
  CHECK_THROWS_AS(io::curve_from_json(io::Json{{"circle", 1}}), InputError);
}

TEST_CASE("15-digit rounding") {
  CHECK(io::format15(0.1) == "0.1");
  CHECK(io::format15(1.0 / 3.0) == "0.333333333333333");
  CHECK(io::round15(1.0 / 3.0) == 0.333333333333333);
  CHECK(io::round15(2.0) == 2.0);
  CHECK(std::isnan(io::round15(std::nan(""))));
  CHECK(std::isinf(io::round15(std::numeric_limits<double>::infinity())));
  // Idempotent.
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = io::round15(u(rng));
    CHECK(io::round15(x) == x);
  }
  const io::Json r = io::rounded(io::Json{{"a", 1.0 / 3.0}, {"b", {1, 2.0 / 3.0}}, {"c", "x"}});
  CHECK(r["a"].get<double>() == 0.333333333333333);
  CHECK(r["b"][1].get<double>() == 0.666666666666667);
  CHECK(r["b"][0].get<int>() == 1);
  CHECK(r["c"] == "x");
  const std::string s = io::dump_result(io::Json{{"z", 1.0}, {"a", 0.5}});
  CHECK(s.back() == '\n');
  CHECK(s.find("\"z\"") < s.find("\"a\""));  // insertion order kept
}

TEST_CASE("csv") {
  const std::string s = io::to_csv({"a", "b"}, {{1.0, 1.0 / 3.0}, {-2.5, 1e-20}});
  CHECK(s == "a,b\n1,0.333333333333333\n-2.5,1e-20\n");
  CHECK(io::to_csv({"x"}, {}) == "x\n");
}

TEST_CASE("atomic write replaces the target and leaves no temp files") {
  const fs::path p = scratch("out.json");
  io::atomic_write(p, "first\n");
  CHECK(slurp(p) == "first\n");
  io::atomic_write(p, "second\n");
  CHECK(slurp(p) == "second\n");
  int files = 0;
  for (const auto& e : fs::directory_iterator(p.parent_path())) files += e.path().filename() == "out.json" ? 1 : 0;
  CHECK(files == 1);
  for (const auto& e : fs::directory_iterator(p.parent_path())) {
    CHECK(e.path().filename().string().find(".tmp.") == std::string::npos);
  }
  CHECK_THROWS_AS(io::atomic_write("/nonexistent_dir_catvar/x.json", "x"), ConfigurationError);
}
