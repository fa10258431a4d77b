#include "catvar/ovals.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "catvar/errors.hpp"
#include "catvar/numerics.hpp"

namespace catvar {

using numerics::kPi;
using numerics::kTwoPi;

namespace {

std::vector<double> coordinate(const std::vector<Eigen::Vector3d>& pts, int j) {
  std::vector<double> c(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) c[k] = pts[k][j];
  return c;
}

// 4th-order periodic central differences, parameter spacing h.
std::vector<double> fd4(const std::vector<double>& x, int order, double h) {
  const int n = static_cast<int>(x.size());
  std::vector<double> d(n);
  for (int k = 0; k < n; ++k) {
    const double m2 = x[(k + n - 2) % n];
    const double m1 = x[(k + n - 1) % n];
    const double p1 = x[(k + 1) % n];
    const double p2 = x[(k + 2) % n];
    d[k] = order == 1 ? (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * h)
                      : (-p2 + 16.0 * p1 - 30.0 * x[k] + 16.0 * m1 - m2) / (12.0 * h * h);
  }
  return d;
}

double relative_tail(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<numerics::Complex> s(x.begin(), x.end());
  const auto spec = numerics::fft(s);
  double top = 0.0;
  double tail = 0.0;
  for (int k = 1; k < n; ++k) {
    const double a = std::abs(spec[k]);
    top = std::max(top, a);
    if (std::abs(numerics::wavenumber(k, n)) > n / 4) tail = std::max(tail, a);
  }
  return top > 0.0 ? tail / top : 0.0;
}

}  // namespace

ClosedCurve::ClosedCurve(std::vector<Eigen::Vector3d> samples, CurvatureMethod method,
                         double min_speed_rel)
    : samples_(std::move(samples)) {
  const int n = size();
  if (n < 32) {
    throw PreconditionError("closed curve needs at least 32 samples, got " + std::to_string(n));
  }
  for (const auto& p : samples_) {
    if (!p.allFinite()) throw PreconditionError("closed curve has non-finite samples");
  }
  std::vector<double> c[3];
  for (int j = 0; j < 3; ++j) {
    c[j] = coordinate(samples_, j);
    tail_ = std::max(tail_, relative_tail(c[j]));
  }
  spectral_ = method == CurvatureMethod::spectral ||
              (method == CurvatureMethod::automatic && tail_ <= 1e-6);

  std::vector<double> d1[3];
  std::vector<double> d2[3];
  const double h = 1.0 / n;
  for (int j = 0; j < 3; ++j) {
    d1[j] = spectral_ ? numerics::spectral_derivative(c[j], 1, 1.0) : fd4(c[j], 1, h);
    d2[j] = spectral_ ? numerics::spectral_derivative(c[j], 2, 1.0) : fd4(c[j], 2, h);
  }
  speed_.resize(n);
  curvature_.resize(n);
  for (int k = 0; k < n; ++k) {
    const Eigen::Vector3d v(d1[0][k], d1[1][k], d1[2][k]);
    const Eigen::Vector3d a(d2[0][k], d2[1][k], d2[2][k]);
    speed_[k] = v.norm();
    curvature_[k] = v.cross(a).norm() / std::pow(speed_[k], 3);
  }
  length_ = numerics::periodic_mean(speed_);
  const double vmin = *std::min_element(speed_.begin(), speed_.end());
  if (!(length_ > 0.0) || !(vmin > min_speed_rel * length_)) {
    throw PreconditionError("closed curve is not immersed (speed " + std::to_string(vmin) + ")");
  }
  arclength_.resize(n);
  if (spectral_) {
    const numerics::TrigInterpolant s(speed_, 1.0);
    for (int k = 0; k < n; ++k) arclength_[k] = s.integral(k * h);
  } else {
    arclength_[0] = 0.0;
    for (int k = 1; k < n; ++k) arclength_[k] = arclength_[k - 1] + 0.5 * h * (speed_[k - 1] + speed_[k]);
  }
}

ClosedCurve resample_arclength(const ClosedCurve& curve, int n) {
  if (n < 32) throw PreconditionError("resample_arclength: need at least 32 nodes");
  const auto& pts = curve.samples();
  const numerics::TrigInterpolant x(coordinate(pts, 0), 1.0);
  const numerics::TrigInterpolant y(coordinate(pts, 1), 1.0);
  const numerics::TrigInterpolant z(coordinate(pts, 2), 1.0);
  const numerics::TrigInterpolant v(curve.speed(), 1.0);
  const double len = v.mean();

  std::vector<Eigen::Vector3d> out(n);
  double u = 0.0;
  for (int j = 0; j < n; ++j) {
    const double target = len * j / n;
    if (j > 0) {
      u = std::max(u, static_cast<double>(j) / n - 0.5);
      for (int it = 0; it < 60; ++it) {
        const double step = (v.integral(u) - target) / v.value(u);
        u = std::clamp(u - step, 0.0, 1.0);
        if (std::abs(step) < 1e-15) break;
      }
    }
    out[j] = {x.value(u), y.value(u), z.value(u)};
  }
  return ClosedCurve(std::move(out), curve.spectral() ? CurvatureMethod::spectral
                                                      : CurvatureMethod::finite_difference);
}

double rayleigh_quotient(const ClosedCurve& curve, const std::vector<double>& f, double eps) {
  const int n = curve.size();
  if (static_cast<int>(f.size()) != n) {
    throw PreconditionError("rayleigh_quotient: f must have one value per node");
  }
  const std::vector<double> fu = numerics::spectral_derivative(f, 1, 1.0);
  double num = 0.0;
  double den = 0.0;
  for (int k = 0; k < n; ++k) {
    const double v = curve.speed()[k];
    const double kap = curve.curvature()[k];
    num += fu[k] * fu[k] / v + kap * kap * f[k] * f[k] * v;
    den += f[k] * f[k] * v;
  }
  num /= n;
  den /= n;
  if (!(den > eps)) throw PreconditionError("rayleigh_quotient: f is (nearly) zero");
  return num / den;
}

double lowest_eigenvalue_at(const ClosedCurve& curve, int n) {
  if (n < 32 || n % 2 != 0) {
    throw ConfigurationError("lowest_eigenvalue: node count must be even and >= 32");
  }
  const ClosedCurve c = resample_arclength(curve, n);
  const double w = kTwoPi / c.length();
  // Periodic Fourier second-derivative matrix on 2 pi, rescaled to length L.
  Eigen::MatrixXd op(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      double d2;
      if (j == k) {
        d2 = -(static_cast<double>(n) * n / 12.0 + 1.0 / 6.0);
      } else {
        const double sn = std::sin((j - k) * kPi / n);
        d2 = -((j - k) % 2 == 0 ? 1.0 : -1.0) / (2.0 * sn * sn);
      }
      op(j, k) = -w * w * d2;
    }
    op(j, j) += c.curvature()[j] * c.curvature()[j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("lowest_eigenvalue: eigensolver failed", 0.0);
  return es.eigenvalues()(0);
}

OvalResult lowest_eigenvalue(const ClosedCurve& curve, const OvalOptions& opts) {
  int n = std::max(32, opts.start_nodes + opts.start_nodes % 2);
  double prev = lowest_eigenvalue_at(curve, n);
  double change = 0.0;
  while (true) {
    if (2 * n > opts.max_nodes) {
      throw ResolutionError("lowest_eigenvalue: no convergence up to " +
                                std::to_string(opts.max_nodes) + " nodes",
                            change);
    }
    n *= 2;
    const double cur = lowest_eigenvalue_at(curve, n);
    change = std::abs(cur - prev) / std::abs(cur);
    prev = cur;
    if (change <= opts.converge_rel) break;
  }
  const double len = resample_arclength(curve, n).length();
  return {len, prev, len * len * prev / (kTwoPi * kTwoPi), n, change};
}

ClosedCurve circle_curve(double radius, int n) { return ellipse_curve(radius, radius, n); }

ClosedCurve ellipse_curve(double a, double b, int n) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("ellipse_curve: semi-axes must be positive");
  std::vector<Eigen::Vector3d> p(n);
  for (int k = 0; k < n; ++k) {
    const double th = kTwoPi * k / n;
    p[k] = {a * std::cos(th), b * std::sin(th), 0.0};
  }
  return ClosedCurve(std::move(p));
}

ClosedCurve rounded_polygon_curve(int lobes, double amplitude, int n) {
  if (lobes < 1 || !(std::abs(amplitude) < 1.0)) {
    throw DomainError("rounded_polygon_curve: need lobes >= 1 and |amplitude| < 1");
  }
  std::vector<Eigen::Vector3d> p(n);
  for (int k = 0; k < n; ++k) {
    const double th = kTwoPi * k / n;
    const double r = 1.0 + amplitude * std::cos(lobes * th);
    p[k] = {r * std::cos(th), r * std::sin(th), 0.0};
  }
  return ClosedCurve(std::move(p));
}

ClosedCurve random_fourier_curve(std::mt19937_64& rng, int max_mode, double amplitude, int n,
                                 bool planar) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  struct Mode {
    int k;
    Eigen::Vector3d c;
    Eigen::Vector3d s;
  };
  std::vector<Mode> modes;
  for (int k = 2; k <= max_mode; ++k) {
    Mode m{k, {}, {}};
    for (int j = 0; j < 3; ++j) {
      m.c[j] = amplitude * u(rng) / (k * k);
      m.s[j] = amplitude * u(rng) / (k * k);
    }
    if (planar) m.c[2] = m.s[2] = 0.0;
    modes.push_back(m);
  }
  std::vector<Eigen::Vector3d> p(n);
  for (int i = 0; i < n; ++i) {
    const double th = kTwoPi * i / n;
    Eigen::Vector3d x(std::cos(th), std::sin(th), 0.0);
    for (const auto& m : modes) x += m.c * std::cos(m.k * th) + m.s * std::sin(m.k * th);
    p[i] = x;
  }
  return ClosedCurve(std::move(p));
}

}  // namespace catvar
