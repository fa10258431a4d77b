#include "catvar/catenoid.hpp"

#include <cmath>
#include <string>

#include "catvar/errors.hpp"
#include "catvar/numerics.hpp"

namespace catvar {

using numerics::kPi;
using numerics::kTwoPi;

Slab::Slab(double lower, double upper) : lower_(lower), upper_(upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper) || !(lower < upper)) {
    throw DomainError("slab requires finite lower < upper, got [" + std::to_string(lower) +
                      ", " + std::to_string(upper) + "]");
  }
}

CatenoidPiece::CatenoidPiece(double s, double t, Slab sl) : scale(s), offset(t), slab(sl) {
  if (!std::isfinite(s) || !(s > 0.0)) {
    throw DomainError("catenoid scale must be positive, got " + std::to_string(s));
  }
  if (!std::isfinite(t)) throw DomainError("catenoid offset must be finite");
}

CanonicalReduction CanonicalReduction::of(const Slab& slab) {
  return {slab.center(), 0.5 * slab.height()};
}

CatenoidPiece CanonicalReduction::reduce(const CatenoidPiece& piece) const {
  return CatenoidPiece(reduce_scale(piece.scale), reduce_offset(piece.offset),
                       Slab::canonical());
}

namespace catenoid {

Eigen::Vector3d parameterize(const CatenoidPiece& piece, double h, double theta) {
  if (!piece.slab.contains(h)) {
    throw OutOfRangeError("height " + std::to_string(h) + " outside slab");
  }
  const double r = numerics::scaled_cosh(piece.scale, (h - piece.offset) / piece.scale);
  return {r * std::cos(theta), r * std::sin(theta), h};
}

double canonical_area(double scale, double offset) {
  // cosh(2t/s) sinh(2/s) = (sinh((2+2t)/s) + sinh((2-2t)/s)) / 2, written with
  // exponentials carrying log(s^2 pi / 4) so small scales do not overflow early.
  const double a = (2.0 + 2.0 * offset) / scale;
  const double b = (2.0 - 2.0 * offset) / scale;
  const double log_pref = std::log(scale * scale * kPi / 4.0);
  auto half_sinh = [&](double x) {
    // (s^2 pi / 4) * (e^x - e^-x)
    if (std::abs(x) < 20.0) return std::exp(log_pref) * 2.0 * std::sinh(x);
    const double sign = x > 0 ? 1.0 : -1.0;
    const double ax = std::abs(x);
    return sign * std::exp(log_pref + ax) * (1.0 - std::exp(-2.0 * ax));
  };
  return half_sinh(a) + half_sinh(b) + kTwoPi * scale;
}

double area_in_slab(const CatenoidPiece& piece) {
  const CanonicalReduction red = CanonicalReduction::of(piece.slab);
  const CatenoidPiece c = red.reduce(piece);
  return red.half_height * red.half_height * canonical_area(c.scale, c.offset);
}

double canonical_boundary_length(double scale, double offset) {
  return kTwoPi * (numerics::scaled_cosh(scale, (1.0 - offset) / scale) +
                   numerics::scaled_cosh(scale, (-1.0 - offset) / scale));
}

double boundary_length(const CatenoidPiece& piece) {
  const CanonicalReduction red = CanonicalReduction::of(piece.slab);
  const CatenoidPiece c = red.reduce(piece);
  return red.half_height * canonical_boundary_length(c.scale, c.offset);
}

double level_length(const CatenoidPiece& piece, double height) {
  if (!piece.slab.contains(height)) {
    throw OutOfRangeError("level " + std::to_string(height) + " outside slab");
  }
  return kTwoPi * numerics::scaled_cosh(piece.scale, (height - piece.offset) / piece.scale);
}

double vertical_flux(double scale) {
  if (!(scale > 0.0)) throw DomainError("vertical_flux: scale must be positive");
  return kTwoPi * scale;
}

Lambda0 solve_lambda0() {
  // On (0, 1) the left side of 2l/(1-l^2) = sinh(2/l) increases from 0 to
  // infinity and the right side decreases, so the difference has one root.
  auto f = [](double l) { return std::sinh(2.0 / l) - 2.0 * l / (1.0 - l * l); };
  auto df = [](double l) {
    const double d = 1.0 - l * l;
    return -2.0 / (l * l) * std::cosh(2.0 / l) - 2.0 * (1.0 + l * l) / (d * d);
  };
  numerics::RootOptions opts;
  opts.bracket_width = 1e-8;
  opts.residual_tol = 1e-12;
  const auto root = numerics::bracketed_newton(f, df, 0.5, 0.99, opts);
  const double l = root.root;
  return {l, std::abs(f(l)), std::abs(std::tanh(1.0 / l) - l)};
}

double ms_indicator(double height) { return 1.0 - height * std::tanh(height); }

double ms_half_height() {
  auto f = [](double t) { return t * std::tanh(t) - 1.0; };
  auto df = [](double t) {
    const double c = std::cosh(t);
    return std::tanh(t) + t / (c * c);
  };
  return numerics::bracketed_newton(f, df, 0.5, 2.0).root;
}

}  // namespace catenoid
}  // namespace catvar
