#include <doctest.h>

#include <cmath>
#include <random>

#include "catvar/catenoid.hpp"
#include "catvar/errors.hpp"
#include "catvar/numerics.hpp"
#include "oracles.hpp"

using namespace catvar;
using catvar::numerics::kPi;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

CatenoidPiece canon(double lam, double t) { return CatenoidPiece(lam, t, Slab::canonical()); }

}  // namespace

TEST_CASE("slab and piece construction invariants") {
  CHECK_THROWS_AS(Slab(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(Slab(2.0, -1.0), DomainError);
  CHECK_THROWS_AS(CatenoidPiece(0.0, 0.0, Slab::canonical()), DomainError);
  CHECK_THROWS_AS(CatenoidPiece(-1.0, 0.0, Slab::canonical()), DomainError);
  const Slab s(-0.5, 2.5);
  CHECK(s.height() == 3.0);
  CHECK(s.center() == 1.0);
}

TEST_CASE("parameterize") {
  const Eigen::Vector3d a = catenoid::parameterize(canon(1, 0), 0.0, 0.0);
  CHECK((a - Eigen::Vector3d(1, 0, 0)).norm() < 1e-15);
  const Eigen::Vector3d b = catenoid::parameterize(canon(1, 0), 1.0, kPi / 2);
  CHECK((b - Eigen::Vector3d(0, std::cosh(1.0), 1.0)).norm() < 1e-15);
  const Eigen::Vector3d c = catenoid::parameterize(canon(2, 0.5), 0.5, 0.0);
  CHECK((c - Eigen::Vector3d(2, 0, 0.5)).norm() < 1e-15);
  CHECK_THROWS_AS(catenoid::parameterize(canon(1, 0), 1.5, 0.0), OutOfRangeError);
}

TEST_CASE("area closed form against quadrature oracle") {
  const double a = catenoid::area_in_slab(canon(1, 0));
  CHECK(rel(a, kPi * std::sinh(2.0) + 2 * kPi) < 1e-14);
  CHECK(rel(a, oracle::catenoid_area(1, 0, -1, 1)) < 1e-8);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ul(std::log(0.2), std::log(5.0));
  std::uniform_real_distribution<double> ut(-2.0, 2.0);
  for (int i = 0; i < 40; ++i) {
    const double lam = std::exp(ul(rng));
    const double t = ut(rng);
    CHECK(rel(catenoid::area_in_slab(canon(lam, t)), oracle::catenoid_area(lam, t, -1, 1)) < 1e-8);
  }
}

TEST_CASE("area on a general slab reduces to the canonical one") {
  const Slab s(0.3, 2.1);
  for (double lam : {0.4, 1.0, 3.0}) {
    for (double t : {-0.5, 1.2, 2.0}) {
      const CatenoidPiece p(lam, t, s);
      CHECK(rel(catenoid::area_in_slab(p), oracle::catenoid_area(lam, t, 0.3, 2.1)) < 1e-8);
      const CatenoidPiece r = CanonicalReduction::of(s).reduce(p);
      CHECK(r.slab.lower() == doctest::Approx(-1.0));
      CHECK(r.slab.upper() == doctest::Approx(1.0));
    }
  }
}

TEST_CASE("area is even in the offset and stationary at t = 0") {
  CHECK(catenoid::area_in_slab(canon(0.7, 0.3)) ==
        doctest::Approx(catenoid::area_in_slab(canon(0.7, -0.3))).epsilon(1e-15));
  for (double lam : {0.3, 0.8, 1.0, 2.5}) {
    const double e = 1e-5;
    const double d = (catenoid::canonical_area(lam, e) - catenoid::canonical_area(lam, -e)) / (2 * e);
    CHECK(std::abs(d) <= 1e-6 * catenoid::canonical_area(lam, 0.0));
  }
}

TEST_CASE("tiny scales stay finite while the area is representable") {
  for (double lam : {0.05, 0.01, 0.003, 0.0029}) {
    const double a = catenoid::canonical_area(lam, 0.0);
    CHECK(std::isfinite(a));
    CHECK(a > 0.0);
    CHECK(std::isfinite(catenoid::canonical_boundary_length(lam, 0.0)));
    // Against the log of the leading exponential.
    CHECK(std::abs(std::log(a) - (2 / lam + std::log(lam * lam * kPi / 2))) < 1e-12 * (2 / lam));
  }
  // Past this the true area exceeds the largest double.
  CHECK(std::isinf(catenoid::canonical_area(0.002, 0.0)));
}

TEST_CASE("grid minimality of area and boundary length at (lambda0, 0)") {
  const double l0 = catenoid::solve_lambda0().value;
  const double a0 = catenoid::canonical_area(l0, 0.0);
  const double b0 = catenoid::canonical_boundary_length(l0, 0.0);
  const auto lams = numerics::logspace(0.3, 3.0, 101);
  const auto ts = numerics::linspace(-1.5, 1.5, 101);
  double amin = 1e300;
  double bmin = 1e300;
  for (double lam : lams) {
    for (double t : ts) {
      amin = std::min(amin, catenoid::canonical_area(lam, t));
      bmin = std::min(bmin, catenoid::canonical_boundary_length(lam, t));
    }
  }
  CHECK(a0 < amin);
  CHECK(b0 < bmin);
}

TEST_CASE("boundary length") {
  CHECK(rel(catenoid::boundary_length(canon(1, 0)), 4 * kPi * std::cosh(1.0)) < 1e-15);
  const double oracle_len = oracle::slice_polyline_length(1, 0, -1) + oracle::slice_polyline_length(1, 0, 1);
  CHECK(rel(catenoid::boundary_length(canon(1, 0)), oracle_len) < 1e-9);
  CHECK(catenoid::boundary_length(canon(0.6, 0.4)) ==
        doctest::Approx(catenoid::boundary_length(canon(0.6, -0.4))).epsilon(1e-15));
  const double l0 = catenoid::solve_lambda0().value;
  CHECK(std::abs(std::tanh(1.0 / l0) - l0) < 1e-10);
}

TEST_CASE("homothety covariance") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.2, 3.0);
  for (int i = 0; i < 20; ++i) {
    const double lam = u(rng);
    const double t = u(rng) - 1.5;
    const double c = u(rng);
    const CatenoidPiece p(lam, t, Slab(-1.0, 1.3));
    const CatenoidPiece q(c * lam, c * t, Slab(-c, 1.3 * c));
    CHECK(rel(catenoid::area_in_slab(q), c * c * catenoid::area_in_slab(p)) < 1e-12);
    CHECK(rel(catenoid::boundary_length(q), c * catenoid::boundary_length(p)) < 1e-12);
    CHECK(rel(catenoid::vertical_flux(c * lam), c * catenoid::vertical_flux(lam)) < 1e-12);
  }
}

TEST_CASE("level length and flux") {
  CHECK(catenoid::level_length(canon(1, 0), 0.0) == doctest::Approx(2 * kPi).epsilon(1e-15));
  CHECK(catenoid::level_length(canon(1, 0), 1.0) == doctest::Approx(2 * kPi * std::cosh(1.0)).epsilon(1e-15));
  CHECK_THROWS_AS(catenoid::level_length(canon(1, 0), 1.0001), OutOfRangeError);
  const CatenoidPiece p(1.3, 0.2, Slab::canonical());
  CHECK(catenoid::level_length(p, 0.2) == doctest::Approx(catenoid::vertical_flux(1.3)).epsilon(1e-15));
  // Minimum over heights at the offset.
  for (double h : numerics::linspace(-1.0, 1.0, 41)) CHECK(catenoid::level_length(p, h) >= catenoid::level_length(p, 0.2));

  CHECK(catenoid::vertical_flux(1.0) == doctest::Approx(2 * kPi));
  CHECK(catenoid::vertical_flux(2.0) == doctest::Approx(4 * kPi));
  for (double h : {-0.8, 0.2, 0.9}) {
    const Eigen::Vector3d f = oracle::catenoid_slice_flux(1.3, 0.2, h);
    CHECK(std::abs(f.z() - catenoid::vertical_flux(1.3)) < 1e-10);
    CHECK(f.head<2>().norm() < 1e-10);
  }
}

TEST_CASE("lambda0") {
  const auto l = catenoid::solve_lambda0();
  CHECK(l.residual_lambdanot <= 1e-12);
  CHECK(l.residual_tanh <= 1e-10);
  CHECK(l.value > 0.83);
  CHECK(l.value < 0.84);
  const double ref = oracle::bisect([](double x) { return std::tanh(1.0 / x) - x; }, 0.5, 0.99);
  CHECK(std::abs(l.value - ref) < 1e-12);
  // Deterministic.
  CHECK(catenoid::solve_lambda0().value == l.value);
}

TEST_CASE("ms indicator") {
  CHECK(catenoid::ms_indicator(0.0) == 1.0);
  const double ts = oracle::bisect([](double t) { return t * std::tanh(t) - 1.0; }, 0.5, 2.0);
  CHECK(std::abs(catenoid::ms_indicator(ts)) < 1e-14);
  CHECK(std::abs(catenoid::ms_half_height() - ts) < 1e-12);
  CHECK(catenoid::ms_half_height() == doctest::Approx(1.1997).epsilon(1e-4));
  for (double h : numerics::linspace(-3, 3, 61)) {
    const double a = catenoid::ms_indicator(h);
    const double b = catenoid::ms_indicator(-h);
    CHECK((a > 0) == (b > 0));
  }
  // t* = 1 / lambda0.
  CHECK(std::abs(catenoid::ms_half_height() * catenoid::solve_lambda0().value - 1.0) < 1e-12);
}
