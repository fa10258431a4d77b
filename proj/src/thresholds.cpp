#include "catvar/thresholds.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "catvar/errors.hpp"
#include "catvar/marginal_stability.hpp"
#include "catvar/numerics.hpp"

namespace catvar::thresholds {

using numerics::kTwoPi;

namespace {

double log_cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::log(2.0);
}

// log of the upper length along the one-parameter family with fixed L-.
double log_upper_length(double lower_length, double a, double height) {
  const double d = height * kTwoPi * std::cosh(a) / lower_length;
  return std::log(lower_length) + log_cosh(a + d) - log_cosh(a);
}

CatenoidPiece piece_from_lower_height(double lower_length, double a, const Slab& slab) {
  const double scale = lower_length / (kTwoPi * std::cosh(a));
  return CatenoidPiece(scale, slab.lower() - scale * a, slab);
}

// Root of log U(a) = target on the monotone side starting at `from` and
// moving in direction `dir`.
double branch_root(double lower_length, double from, double dir, double target,
                   double height) {
  auto g = [&](double a) { return log_upper_length(lower_length, a, height) - target; };
  double step = 0.25;
  double far = from + dir * step;
  int guard = 0;
  while (g(far) < 0.0) {
    step *= 2.0;
    far = from + dir * step;
    if (++guard > 200) throw NumericalError("spanning_catenoids: branch bracket failed", g(far));
  }
  double lo = std::min(from, far);
  double hi = std::max(from, far);
  // g < 0 at `from`, > 0 at `far`.
  if (dir > 0) {
    return numerics::bisect_predicate([&](double a) { return g(a) >= 0.0; }, lo, hi);
  }
  return numerics::bisect_predicate([&](double a) { return g(a) < 0.0; }, lo, hi);
}

}  // namespace

MsSolution ms_piece_for_apex(double apex_height, const Slab& slab) {
  const ConeTangency tc = stability::tangent_cone_heights(apex_height);
  const double scale = slab.height() / (tc.t_plus - tc.t_minus);
  const double offset = slab.lower() - scale * tc.t_minus;
  return {scale,
          offset,
          kTwoPi * numerics::scaled_cosh(scale, tc.t_minus),
          kTwoPi * numerics::scaled_cosh(scale, tc.t_plus),
          apex_height,
          slab};
}

MsSolution ms_piece_for_lower_length(double lower_length, const Slab& slab) {
  if (!(lower_length > 0.0) || !std::isfinite(lower_length)) {
    throw DomainError("ms_piece_for_lower_length: length must be positive and finite");
  }
  auto lower_at = [&](double z) { return ms_piece_for_apex(z, slab).lower_length; };

  // Lower length decreases from +inf (z -> -inf) to 0 (z -> +inf).
  double z_lo = -1.0;
  double z_hi = 1.0;
  int guard = 0;
  while (lower_at(z_lo) < lower_length) {
    z_lo *= 2.0;
    if (++guard > 60) throw NumericalError("ms_piece_for_lower_length: no lower bracket", z_lo);
  }
  guard = 0;
  while (lower_at(z_hi) > lower_length) {
    z_hi *= 2.0;
    if (++guard > 60) throw NumericalError("ms_piece_for_lower_length: no upper bracket", z_hi);
  }
  const double z = numerics::bisect_predicate(
      [&](double zz) { return lower_at(zz) <= lower_length; }, z_lo, z_hi);
  const MsSolution sol = ms_piece_for_apex(z, slab);
  const double residual = std::abs(sol.lower_length / lower_length - 1.0);
  if (residual > 1e-10) {
    throw NumericalError("ms_piece_for_lower_length: residual " + std::to_string(residual),
                         residual);
  }
  return sol;
}

double f_omega(double lower_length, const Slab& slab) {
  return ms_piece_for_lower_length(lower_length, slab).upper_length;
}

double l_crit(const Slab& slab) {
  const MsSolution sym = ms_piece_for_apex(0.0, slab);
  return sym.lower_length + sym.upper_length;
}

double upper_length_at(double lower_length, double a, const Slab& slab) {
  return std::exp(log_upper_length(lower_length, a, slab.height()));
}

SpanningResult spanning_catenoids(double lower_length, double upper_length, const Slab& slab,
                                  const SpanningOptions& opts) {
  if (!(lower_length > 0.0) || !(upper_length > 0.0)) {
    throw DomainError("spanning_catenoids: lengths must be positive");
  }
  const MsSolution ms = ms_piece_for_lower_length(lower_length, slab);
  const double threshold = ms.upper_length;
  const double gap = (upper_length - threshold) / threshold;

  SpanningResult result{{}, threshold, gap, false};
  if (std::abs(gap) <= opts.tangential_rel_tol) {
    result.tangential = true;
    result.pieces.push_back(ms.piece());
    return result;
  }
  if (gap < 0.0) return result;

  // Unit-catenoid height of the lower circle on the marginal piece; the
  // upper length along the family is minimized there.
  const double a_star = (slab.lower() - ms.offset) / ms.scale;
  const double target = std::log(upper_length);
  const double a_left = branch_root(lower_length, a_star, -1.0, target, slab.height());
  const double a_right = branch_root(lower_length, a_star, +1.0, target, slab.height());

  for (double a : {a_left, a_right}) {
    CatenoidPiece p = piece_from_lower_height(lower_length, a, slab);
    bool duplicate = false;
    for (const auto& q : result.pieces) {
      if (std::abs(q.scale - p.scale) + std::abs(q.offset - p.offset) <= opts.dedup_tol) {
        duplicate = true;
      }
    }
    if (!duplicate) result.pieces.push_back(p);
  }
  return result;
}

}  // namespace catvar::thresholds
