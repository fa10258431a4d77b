#include "catvar/marginal_stability.hpp"

#include <algorithm>
#include <cmath>

#include "catvar/errors.hpp"
#include "catvar/numerics.hpp"

namespace catvar::stability {

namespace {

double sech2(double s) {
  const double c = std::cosh(s);
  return 1.0 / (c * c);
}

// Root of t - coth t = z on t > 0. The map is increasing with range R.
double positive_tangency(double z) {
  auto f = [z](double t) { return t - 1.0 / std::tanh(t) - z; };
  auto df = [](double t) {
    const double s = std::sinh(t);
    return 1.0 + 1.0 / (s * s);
  };
  // coth t > 1/t gives f(lo) < 0; coth t <= 1 + 1/t gives f(hi) > 0.
  const double lo = 1.0 / (std::abs(z) + 2.0);
  const double hi = std::abs(z) + 2.0;
  return numerics::bracketed_newton(f, df, lo, hi).root;
}

struct Shot {
  bool crossed;  // solution changed sign (or hit zero) in (a, b]
  std::vector<double> u;
};

// Numerov for u'' = -q(s) u with u(a) = 0, u(a + h) = h.
Shot shoot(double a, double b, int nodes, double mu, int mode, bool keep) {
  const double h = (b - a) / (nodes - 1);
  const double h2 = h * h / 12.0;
  const double k2 = static_cast<double>(mode) * mode;
  auto q = [&](double s) {
    const double c = std::cosh(s);
    return 2.0 / (c * c) + mu * c * c - k2;
  };
  Shot shot{false, {}};
  if (keep) shot.u.resize(nodes);
  double u_prev = 0.0;
  double u_cur = h;
  double q_prev = q(a);
  double q_cur = q(a + h);
  if (keep) {
    shot.u[0] = u_prev;
    shot.u[1] = u_cur;
  }
  for (int i = 2; i < nodes; ++i) {
    const double s_next = (i == nodes - 1) ? b : a + i * h;
    const double q_next = q(s_next);
    double u_next;
    if (std::max({std::abs(q_prev), std::abs(q_cur), std::abs(q_next)}) * h2 < 1.0 / 12.0) {
      u_next = (2.0 * u_cur * (1.0 - 5.0 * h2 * q_cur) - u_prev * (1.0 + h2 * q_prev)) /
               (1.0 + h2 * q_next);
    } else {
      // Numerov loses sign fidelity once h^2 |q| is large (weight cosh^2 on
      // long pieces); use the exponentially fitted step, exact for constant q.
      const double x = h * std::sqrt(std::abs(q_cur));
      const double c = q_cur < 0.0 ? std::cosh(std::min(x, 300.0)) : std::cos(x);
      u_next = 2.0 * c * u_cur - u_prev;
    }
    if (keep) shot.u[i] = u_next;
    if (u_next <= 0.0) {
      shot.crossed = true;
      if (!keep) return shot;
    }
    u_prev = u_cur;
    u_cur = u_next;
    q_prev = q_cur;
    q_cur = q_next;
    // Rescale to stay in range on long intervals.
    const double m = std::max(std::abs(u_prev), std::abs(u_cur));
    if (m > 1e150) {
      u_prev /= m;
      u_cur /= m;
      if (keep) {
        for (int j = 0; j <= i; ++j) shot.u[j] /= m;
      }
    }
  }
  return shot;
}

}  // namespace

ConeTangency tangent_cone_heights(double apex_height) {
  const double tp = positive_tangency(apex_height);
  // Reflection through {x3 = 0}: t_-(z) = -t_+(-z).
  const double tm = -positive_tangency(-apex_height);
  return {apex_height, tp, tm};
}

CatenoidPiece cat_ms(double apex_height) {
  const ConeTangency c = tangent_cone_heights(apex_height);
  return CatenoidPiece(1.0, 0.0, Slab(c.t_minus, c.t_plus));
}

double dilation_jacobi_field(double apex_height, double height) {
  return 1.0 - (height - apex_height) * std::tanh(height);
}

JacobiSpectrumResult lowest_jacobi_eigenvalue(const CatenoidPiece& piece,
                                              const EigenOptions& opts) {
  if (opts.mesh_size < 16) {
    throw ConfigurationError("lowest_jacobi_eigenvalue: mesh needs at least 16 nodes");
  }
  if (piece.scale != 1.0 || piece.offset != 0.0) {
    throw PreconditionError(
        "lowest_jacobi_eigenvalue: expects a unit-scale zero-offset piece (use unit_normalized)");
  }
  const double a = piece.slab.lower();
  const double b = piece.slab.upper();
  const int n = opts.mesh_size;
  const int mode = opts.angular_mode;

  // Rayleigh quotient bound: mu >= -(2 - k^2)_+ / min cosh^2 >= -2.
  double lo = -2.5;
  double hi = 1.0;
  while (!shoot(a, b, n, hi, mode, false).crossed) {
    hi *= 2.0;
    if (hi > 1e12) throw NumericalError("lowest_jacobi_eigenvalue: no upper bracket", hi);
  }
  if (shoot(a, b, n, lo, mode, false).crossed) {
    throw NumericalError("lowest_jacobi_eigenvalue: lower bracket already oscillates", lo);
  }
  const double mu = numerics::bisect_predicate(
      [&](double m) { return shoot(a, b, n, m, mode, false).crossed; }, lo, hi, 1e-17);

  Shot shot = shoot(a, b, n, mu, mode, true);
  double peak = 0.0;
  for (double v : shot.u) peak = std::max(peak, std::abs(v));
  for (double& v : shot.u) v /= peak;
  return {mu, std::move(shot.u), n};
}

double lowest_jacobi_eigenvalue_fd(double a, double b, int interior_nodes, int angular_mode) {
  if (interior_nodes < 16) {
    throw ConfigurationError("lowest_jacobi_eigenvalue_fd: need at least 16 interior nodes");
  }
  const int n = interior_nodes;
  const double h = (b - a) / (n + 1);
  const double k2 = static_cast<double>(angular_mode) * angular_mode;
  // Symmetrized pencil: W^{-1/2} (D + V) W^{-1/2} with W = diag(cosh^2).
  std::vector<double> diag(n);
  std::vector<double> off(n > 0 ? n - 1 : 0);
  std::vector<double> winv(n);
  for (int i = 0; i < n; ++i) {
    const double s = a + (i + 1) * h;
    const double c = std::cosh(s);
    winv[i] = 1.0 / c;
    diag[i] = (2.0 / (h * h) + k2 - 2.0 * sech2(s)) * winv[i] * winv[i];
  }
  for (int i = 0; i + 1 < n; ++i) off[i] = -1.0 / (h * h) * winv[i] * winv[i + 1];

  // Number of eigenvalues below x from the LDL^T pivots.
  auto count_below = [&](double x) {
    int count = 0;
    double d = diag[0] - x;
    if (d < 0) ++count;
    for (int i = 1; i < n; ++i) {
      const double denom = (d == 0.0) ? 1e-300 : d;
      d = diag[i] - x - off[i - 1] * off[i - 1] / denom;
      if (d < 0) ++count;
    }
    return count;
  };
  double lo = -2.5;
  double hi = 1.0;
  while (count_below(hi) == 0) hi *= 2.0;
  return numerics::bisect_predicate([&](double x) { return count_below(x) >= 1; }, lo, hi,
                                    1e-17);
}

CatenoidPiece unit_normalized(const CatenoidPiece& piece) {
  const double a = (piece.slab.lower() - piece.offset) / piece.scale;
  const double b = (piece.slab.upper() - piece.offset) / piece.scale;
  return CatenoidPiece(1.0, 0.0, Slab(a, b));
}

}  // namespace catvar::stability
