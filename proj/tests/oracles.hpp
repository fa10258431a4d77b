// Independent reference computations for tests. Nothing here calls the
// library routine it is used to check.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Area of the catenoid piece: Gauss-Legendre (64 nodes per panel) in height
// times trapezoid in angle, with the area element from the cross product of
// the coordinate tangents.
inline double catenoid_area(double lam, double t, double lo, double hi, int panels = 8,
                            int angles = 256) {
  double total = 0.0;
  const double w = (hi - lo) / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = lo + p * w;
    total += boost::math::quadrature::gauss<double, 64>::integrate(
        [&](double h) {
          double acc = 0.0;
          for (int k = 0; k < angles; ++k) {
            const double th = 2.0 * kPi * k / angles;
            const double u = (h - t) / lam;
            const Eigen::Vector3d fh(std::sinh(u) * std::cos(th), std::sinh(u) * std::sin(th), 1.0);
            const Eigen::Vector3d fth(-lam * std::cosh(u) * std::sin(th),
                                      lam * std::cosh(u) * std::cos(th), 0.0);
            acc += fh.cross(fth).norm();
          }
          return acc * 2.0 * kPi / angles;
        },
        a, a + w);
  }
  return total;
}

// Polyline length of the slice circle at height h.
inline double slice_polyline_length(double lam, double t, double h, int n = 200000) {
  const double r = lam * std::cosh((h - t) / lam);
  double len = 0.0;
  for (int k = 0; k < n; ++k) {
    const double a = 2.0 * kPi * k / n;
    const double b = 2.0 * kPi * (k + 1) / n;
    len += std::hypot(r * (std::cos(b) - std::cos(a)), r * (std::sin(b) - std::sin(a)));
  }
  return len;
}

// Flux of the slice at height h: sum of conormal * arclength element, where
// the conormal is the unit height tangent of the parameterization.
inline Eigen::Vector3d catenoid_slice_flux(double lam, double t, double h, int n = 4096) {
  Eigen::Vector3d f = Eigen::Vector3d::Zero();
  const double u = (h - t) / lam;
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * kPi * k / n;
    const Eigen::Vector3d fh(std::sinh(u) * std::cos(th), std::sinh(u) * std::sin(th), 1.0);
    const double ds = lam * std::cosh(u) * 2.0 * kPi / n;
    f += fh.normalized() * ds;
  }
  return f;
}

// Plain bisection for a continuous sign change.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Lowest Dirichlet eigenvalue of -u'' - 2 sech^2 u + k^2 u = mu cosh^2 u on
// (a, b): generalized dense eigenproblem with the 3-point stencil.
inline double jacobi_dense(double a, double b, int n, int mode = 0) {
  const double h = (b - a) / (n + 1);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const double s = a + (i + 1) * h;
    const double c = std::cosh(s);
    A(i, i) = 2.0 / (h * h) - 2.0 / (c * c) + mode * mode;
    if (i + 1 < n) A(i, i + 1) = A(i + 1, i) = -1.0 / (h * h);
    B(i, i) = c * c;
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(A, B, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Number of solutions (lam, c) of the two boundary-length equations, by
// eliminating c through the lower equation (two branches) and counting sign
// changes of the upper residual along a dense lam grid.
inline int spanning_grid_count(double lm, double lp, double lo, double hi, int n = 200000) {
  const double lam_max = lm / (2 * kPi);
  int count = 0;
  for (int branch : {-1, 1}) {
    double prev = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double lam = lam_max * i / (n + 1);
      const double c = lo - branch * lam * std::acosh(lm / (2 * kPi * lam));
      const double r = 2 * kPi * lam * std::cosh((hi - c) / lam) - lp;
      if (i > 1 && (r < 0) != (prev < 0)) ++count;
      prev = r;
    }
  }
  return count;
}

// Perimeter of the ellipse by adaptive Gauss-Kronrod.
inline double ellipse_perimeter(double a, double b) {
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
      [&](double t) { return std::hypot(a * std::sin(t), b * std::cos(t)); }, 0.0, 2.0 * kPi, 15,
      1e-15);
}

// Lowest periodic eigenvalue of -y'' + V(s) y on [0, L): bisection on the
// monodromy trace, which equals 2 at the periodic ground state and exceeds 2
// below it. V is supplied as a callable; RK4 with `steps` steps.
inline double floquet_ground_state(const std::function<double(double)>& V, double L, double lo,
                                   double hi, int steps = 4000) {
  auto trace = [&](double lam) {
    auto integrate = [&](double y0, double dy0) {
      double y = y0;
      double d = dy0;
      const double h = L / steps;
      for (int i = 0; i < steps; ++i) {
        const double s = i * h;
        auto acc = [&](double ss, double yy) { return (V(ss) - lam) * yy; };
        const double k1y = d, k1d = acc(s, y);
        const double k2y = d + 0.5 * h * k1d, k2d = acc(s + 0.5 * h, y + 0.5 * h * k1y);
        const double k3y = d + 0.5 * h * k2d, k3d = acc(s + 0.5 * h, y + 0.5 * h * k2y);
        const double k4y = d + h * k3d, k4d = acc(s + h, y + h * k3y);
        y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
        d += h / 6.0 * (k1d + 2 * k2d + 2 * k3d + k4d);
      }
      return std::pair{y, d};
    };
    const auto [y1, d1] = integrate(1.0, 0.0);
    const auto [y2, d2] = integrate(0.0, 1.0);
    (void)d1;
    (void)y2;
    return y1 + d2;
  };
  return bisect([&](double lam) { return trace(lam) - 2.0; }, lo, hi);
}

// Direct evaluation of a Laurent table and its derivative.
struct Laurent {
  std::map<int, std::complex<double>> c;
  std::complex<double> operator()(std::complex<double> z) const {
    std::complex<double> s = 0.0;
    for (const auto& [p, a] : c) s += a * std::pow(z, p);
    return s;
  }
  std::complex<double> deriv(std::complex<double> z) const {
    std::complex<double> s = 0.0;
    for (const auto& [p, a] : c) {
      if (p != 0) s += static_cast<double>(p) * a * std::pow(z, p - 1);
    }
    return s;
  }
};

}  // namespace oracle
