#include "catvar/weierstrass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Geometry>
#include <boost/math/tools/minima.hpp>

#include "catvar/errors.hpp"
#include "catvar/numerics.hpp"

namespace catvar {

using numerics::kPi;
using numerics::kTwoPi;
using Vector3cd = Eigen::Matrix<Complex, 3, 1>;

namespace {

constexpr Complex kI(0.0, 1.0);

Vector3cd phi(const WeierstrassData& d, Complex z) {
  const Complex g = d.g(z);
  const Complex h = d.h(z);
  const Complex gi = 1.0 / g;
  return {0.5 * (gi - g) * h, 0.5 * kI * (gi + g) * h, h};
}

Vector3cd dphi(const WeierstrassData& d, Complex z) {
  const Complex g = d.g(z);
  const Complex gp = d.g.derivative(z);
  const Complex h = d.h(z);
  const Complex hp = d.h.derivative(z);
  const Complex gi = 1.0 / g;
  const Complex gip = -gp * gi * gi;
  return {0.5 * ((gip - gp) * h + (gi - g) * hp), 0.5 * kI * ((gip + gp) * h + (gi + g) * hp),
          hp};
}

Eigen::Vector3d re(const Vector3cd& v) { return {v[0].real(), v[1].real(), v[2].real()}; }
Eigen::Vector3d im(const Vector3cd& v) { return {v[0].imag(), v[1].imag(), v[2].imag()}; }

// Conformal factor of the immersion in log coordinates (t, theta).
double conformal_factor(const WeierstrassData& d, Complex z) {
  const double ag = std::abs(d.g(z));
  return 0.5 * std::abs(z * d.h(z)) * (ag + 1.0 / ag);
}

Complex standard_normal_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re_part = n(rng);
  const double im_part = n(rng);
  return Complex(re_part, im_part) / std::sqrt(2.0);
}

int winding(const LaurentPolynomial& g, double rho, int scan) {
  double total = 0.0;
  Complex prev = g(Complex(rho, 0.0));
  for (int k = 1; k <= scan; ++k) {
    const Complex cur = g(std::polar(rho, kTwoPi * k / scan));
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

}  // namespace

bool WeierstrassData::height_adapted() const {
  const auto& t = h.terms();
  if (t.size() != 1 || t.begin()->first != -1) return false;
  const Complex c = t.begin()->second;
  return c.imag() == 0.0 && c.real() > 0.0;
}

double WeierstrassData::geometric_mean_radius() const { return std::sqrt(r_inner * r_outer); }

void check_radii(const WeierstrassData& data) {
  if (!(data.r_inner > 0.0) || !(data.r_inner < data.r_outer) || !std::isfinite(data.r_outer)) {
    throw DomainError("Weierstrass data needs 0 < r_inner < r_outer");
  }
}

WeierstrassData catenoid_data(double scale, double r_inner, double r_outer) {
  if (!(scale > 0.0)) throw DomainError("catenoid_data: scale must be positive");
  WeierstrassData d{LaurentPolynomial::monomial(1, 1.0), LaurentPolynomial::monomial(-1, scale),
                    r_inner, r_outer};
  check_radii(d);
  return d;
}

double PeriodResiduals::max_relative() const {
  return std::max(max_relative_closing(), std::max(vertical_g, vertical_ginv) / scale);
}

double PeriodResiduals::max_relative_closing() const {
  return std::max(real_period, closing) / scale;
}

PeriodResiduals period_residuals(const WeierstrassData& data, int samples) {
  check_radii(data);
  const double rho = data.geometric_mean_radius();
  const auto& d = data;
  const Complex res_h = circle_residue([&](Complex z) { return d.h(z); }, rho, samples);
  const Complex res_gh = circle_residue([&](Complex z) { return d.g(z) * d.h(z); }, rho, samples);
  const Complex res_ghi =
      circle_residue([&](Complex z) { return d.h(z) / d.g(z); }, rho, samples);
  double scale = 0.0;
  for (int k = 0; k < samples; ++k) {
    const Complex z = std::polar(rho, kTwoPi * k / samples);
    scale += std::abs(z * d.h(z));
  }
  scale /= samples;
  // oint f dz = 2 pi i Res f; all entries below are divided by 2 pi.
  const Complex int_gh = kI * res_gh;
  const Complex int_ghi = kI * res_ghi;
  PeriodResiduals r{};
  r.real_period = std::abs((kI * res_h).real());
  r.closing = std::abs(int_gh - std::conj(int_ghi));
  r.vertical_g = std::abs(int_gh);
  r.vertical_ginv = std::abs(int_ghi);
  r.scale = scale > 0.0 ? scale : 1.0;
  return r;
}

GaussMapCheck check_gauss_map(const WeierstrassData& data, double eps, int scan, int circles) {
  check_radii(data);
  GaussMapCheck c{};
  c.winding_inner = winding(data.g, data.r_inner, scan);
  c.winding_outer = winding(data.g, data.r_outer, scan);
  c.min_modulus = std::numeric_limits<double>::infinity();
  for (double rho : numerics::logspace(data.r_inner, data.r_outer, std::max(circles, 2))) {
    for (int k = 0; k < scan; ++k) {
      c.min_modulus = std::min(c.min_modulus, std::abs(data.g(std::polar(rho, kTwoPi * k / scan))));
    }
  }
  c.nonvanishing = c.winding_inner == c.winding_outer && c.min_modulus >= eps;
  return c;
}

void validate(const WeierstrassData& data, const DataTolerances& tol) {
  check_radii(data);
  if (data.g.is_zero()) throw DataInvalidError("Gauss map g is identically zero", 0.0);
  const GaussMapCheck gm = check_gauss_map(data, tol.gauss_eps);
  if (!gm.nonvanishing) {
    throw DataInvalidError("Gauss map vanishes on the annulus (winding " +
                               std::to_string(gm.winding_inner) + " vs " +
                               std::to_string(gm.winding_outer) + ")",
                           gm.min_modulus);
  }
  const PeriodResiduals pr = period_residuals(data);
  if (pr.max_relative() > tol.period_rel) {
    throw DataInvalidError("period/flux residual " + std::to_string(pr.max_relative()) +
                               " exceeds tolerance",
                           pr.max_relative());
  }
  const double f3 = kTwoPi * data.h.coefficient(-1).real();
  if (!(std::abs(f3) > tol.min_flux_rel * kTwoPi * pr.scale) || data.h.is_zero()) {
    throw DataInvalidError("vertical flux vanishes (planar or degenerate data)", f3);
  }
}

Eigen::Vector3d flux_at_radius(const WeierstrassData& data, double rho, int samples) {
  Vector3cd acc = Vector3cd::Zero();
  for (int k = 0; k < samples; ++k) {
    const Complex z = std::polar(rho, kTwoPi * k / samples);
    acc += phi(data, z) * (kI * z);
  }
  Eigen::Vector3d f = im(acc) * (kTwoPi / samples);
  if (f.z() < 0.0) f = -f;
  return f;
}

Eigen::Vector3d flux(const WeierstrassData& data) {
  check_radii(data);
  return flux_at_radius(data, data.geometric_mean_radius());
}

FluxAlignment flux_alignment(const WeierstrassData& data, double tol) {
  const Eigen::Vector3d f = flux(data);
  FluxAlignment a;
  a.flux = f;
  const double n = f.norm();
  if (n == 0.0) throw DataInvalidError("flux_alignment: zero flux", 0.0);
  a.tilt = std::acos(std::clamp(f.z() / n, -1.0, 1.0));
  a.rotation =
      Eigen::Quaterniond::FromTwoVectors(f / n, Eigen::Vector3d::UnitZ()).toRotationMatrix();
  a.vertical = f.head<2>().norm() <= tol * n;
  return a;
}

// ---------------------------------------------------------------------------

SampledAnnulus immerse(const WeierstrassData& data, const GridSpec& grid,
                       const ImmersionOptions& opts) {
  if (grid.levels < 2 || grid.angles < 8 || grid.path_nodes < 1) {
    throw ConfigurationError("immerse: grid needs >= 2 levels, >= 8 angles, >= 1 path node");
  }
  validate(data, opts.data);

  SampledAnnulus a;
  a.levels = grid.levels;
  a.angles = grid.angles;
  a.log_radii = numerics::linspace(std::log(data.r_inner), std::log(data.r_outer), grid.levels);
  a.thetas.resize(grid.angles);
  for (int k = 0; k < grid.angles; ++k) a.thetas[k] = kTwoPi * k / grid.angles;
  a.flux_vertical = kTwoPi * data.h.coefficient(-1).real();
  a.modulus_mu = a.flux_vertical / kTwoPi;
  a.height_adapted = data.height_adapted();

  const std::size_t nodes = static_cast<std::size_t>(grid.levels) * grid.angles;
  a.points.resize(nodes);
  a.tangent_t.resize(nodes);
  a.tangent_theta.resize(nodes);
  a.metric_factor.resize(nodes);
  a.normal.resize(nodes);
  a.second_form.resize(nodes);

  // Base point z0 = r_inner: value of the Laurent primitive with no
  // constant term, so the immersion is not shifted arbitrarily.
  Eigen::Vector3d base = Eigen::Vector3d::Zero();
  {
    const int n = 1024;
    const double rho = data.r_inner;
    std::vector<Complex> s[3];
    for (auto& v : s) v.resize(n);
    for (int k = 0; k < n; ++k) {
      const Vector3cd p = phi(data, std::polar(rho, kTwoPi * k / n));
      for (int j = 0; j < 3; ++j) s[j][k] = p[j];
    }
    for (int j = 0; j < 3; ++j) {
      const std::vector<Complex> spec = numerics::fft(s[j]);
      Complex prim = 0.0;
      for (int k = 0; k < n; ++k) {
        const int w = numerics::wavenumber(k, n);
        const Complex bin = spec[k] / static_cast<double>(n);  // a_w rho^w
        prim += (w == -1) ? bin * rho * std::log(rho) : bin * rho / static_cast<double>(w + 1);
      }
      base[j] = prim.real();
    }
  }

  const numerics::GaussRule rule = numerics::gauss_legendre(grid.path_nodes);
  // Re \int phi(z) z dw along w = t + i theta, from w0 to w1 (straight in w).
  auto segment = [&](Complex w0, Complex w1) {
    Vector3cd acc = Vector3cd::Zero();
    const Complex half = 0.5 * (w1 - w0);
    const Complex mid = 0.5 * (w0 + w1);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const Complex z = std::exp(mid + half * rule.nodes[q]);
      acc += rule.weights[q] * phi(data, z) * z;
    }
    return re(acc * half);
  };

  const double mu_ref = a.modulus_mu;
  double closure = 0.0;
  double min_metric = std::numeric_limits<double>::infinity();
  Eigen::Vector3d radial = base;
  for (int i = 0; i < grid.levels; ++i) {
    const double t = a.log_radii[i];
    if (i > 0) radial += segment(Complex(a.log_radii[i - 1], 0.0), Complex(t, 0.0));
    Eigen::Vector3d x = radial;
    for (int k = 0; k < grid.angles; ++k) {
      const double th = a.thetas[k];
      const int idx = a.index(i, k);
      if (k > 0) x += segment(Complex(t, a.thetas[k - 1]), Complex(t, th));
      a.points[idx] = x;

      const Complex z = std::exp(Complex(t, th));
      const Vector3cd zp = phi(data, z) * z;
      const Vector3cd w = z * (dphi(data, z) * z + phi(data, z));
      const Eigen::Vector3d xt = re(zp);
      const Eigen::Vector3d xth = -im(zp);
      const Eigen::Vector3d xtt = re(w);
      const Eigen::Vector3d xtth = -im(w);
      a.tangent_t[idx] = xt;
      a.tangent_theta[idx] = xth;
      a.metric_factor[idx] = conformal_factor(data, z);
      min_metric = std::min(min_metric, a.metric_factor[idx]);
      const Eigen::Vector3d cr = xt.cross(xth);
      const double crn = cr.norm();
      const Eigen::Vector3d n = crn > 0.0 ? Eigen::Vector3d(cr / crn) : Eigen::Vector3d::Zero();
      a.normal[idx] = n;
      Eigen::Matrix2d ii;
      ii << xtt.dot(n), xtth.dot(n), xtth.dot(n), -xtt.dot(n);
      a.second_form[idx] = ii;
    }
    x += segment(Complex(t, a.thetas.back()), Complex(t, kTwoPi));
    closure = std::max(closure, (x - radial).norm() / a.flux_vertical);
  }
  a.loop_closure_error = closure;

  if (min_metric < opts.metric_eps * mu_ref) {
    throw BranchPointError("conformal factor vanishes (branch point) on the annulus", min_metric);
  }
  if (closure > opts.closure_rel) {
    throw DataInvalidError("immersion loops do not close: " + std::to_string(closure), closure);
  }
  return a;
}

double conformality_defect(const SampledAnnulus& a) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const double lt = a.tangent_t[i].norm();
    const double lth = a.tangent_theta[i].norm();
    const double d = (std::abs(lt - lth) + std::abs(a.tangent_t[i].dot(a.tangent_theta[i]))) /
                         (lt * lt) +
                     std::abs(lt - a.metric_factor[i]) / a.metric_factor[i];
    worst = std::max(worst, d);
  }
  return worst;
}

double harmonicity_defect(const SampledAnnulus& a) {
  const double dt = a.delta_t();
  const double dth = kTwoPi / a.angles;
  double scale = 0.0;
  for (const auto& p : a.points) scale = std::max(scale, p.norm());
  double worst = 0.0;
  for (int i = 1; i + 1 < a.levels; ++i) {
    for (int k = 0; k < a.angles; ++k) {
      const int kp = (k + 1) % a.angles;
      const int km = (k + a.angles - 1) % a.angles;
      const Eigen::Vector3d& c = a.points[a.index(i, k)];
      const Eigen::Vector3d lap =
          (a.points[a.index(i + 1, k)] - 2.0 * c + a.points[a.index(i - 1, k)]) / (dt * dt) +
          (a.points[a.index(i, kp)] - 2.0 * c + a.points[a.index(i, km)]) / (dth * dth);
      worst = std::max(worst, lap.norm());
    }
  }
  return worst / scale;
}

double measured_modulus(const SampledAnnulus& a, int level) {
  double acc = 0.0;
  for (int k = 0; k < a.angles; ++k) acc += a.tangent_t[a.index(level, k)].z();
  return acc / a.angles;
}

// ---------------------------------------------------------------------------

double circle_length(const WeierstrassData& data, double t, int nodes) {
  const double rho = std::exp(t);
  // Neumaier summation: L'' divides roundoff by the squared stencil step.
  double sum = 0.0;
  double comp = 0.0;
  for (int k = 0; k < nodes; ++k) {
    const Complex z = std::polar(rho, kTwoPi * k / nodes);
    const Complex zh = z * data.h(z);
    const Complex g = data.g(z);
    const double term = std::abs(zh * g) + std::abs(zh / g);
    const double next = sum + term;
    comp += std::abs(sum) >= std::abs(term) ? (sum - next) + term : (term - next) + sum;
    sum = next;
  }
  return 0.5 * (sum + comp) * kTwoPi / nodes;
}

LevelProfile level_profile(const WeierstrassData& data, int num_levels,
                           const ProfileOptions& opts) {
  if (num_levels < 1) throw ConfigurationError("level_profile: need at least one level");
  if (!(opts.fd_step > 0.0) || opts.quad_nodes < 8) {
    throw ConfigurationError("level_profile: fd_step must be positive and quad_nodes >= 8");
  }
  validate(data);
  const double t_lo = std::log(data.r_inner) + 2.0 * opts.fd_step;
  const double t_hi = std::log(data.r_outer) - 2.0 * opts.fd_step;
  if (!(t_lo < t_hi)) throw DomainError("level_profile: annulus too thin for the stencil");

  LevelProfile p;
  p.fd_step = opts.fd_step;
  p.flux_vertical = kTwoPi * data.h.coefficient(-1).real();
  p.modulus_mu = p.flux_vertical / kTwoPi;
  p.height_adapted = data.height_adapted();
  p.log_radii = num_levels == 1 ? std::vector<double>{0.5 * (t_lo + t_hi)}
                                : numerics::linspace(t_lo, t_hi, num_levels);

  // Pick the node count on the extreme stencil points, where the integrand
  // varies most.
  int nodes = opts.quad_nodes;
  for (int r = 0;; ++r) {
    double worst = 0.0;
    for (double t : {t_lo - 2.0 * opts.fd_step, t_hi + 2.0 * opts.fd_step}) {
      const double a = circle_length(data, t, nodes);
      const double b = circle_length(data, t, 2 * nodes);
      worst = std::max(worst, std::abs(a - b) / b);
    }
    if (worst <= opts.resolution_rel) break;
    if (r >= opts.max_refinements) {
      throw ResolutionError("level_profile: quadrature did not settle", worst);
    }
    nodes *= 2;
  }
  nodes *= 2;

  const double h = opts.fd_step;
  const double scale = p.modulus_mu;
  for (double t : p.log_radii) {
    const double l0 = circle_length(data, t, nodes);
    const double d2 = (-circle_length(data, t + 2 * h, nodes) +
                       16.0 * circle_length(data, t + h, nodes) - 30.0 * l0 +
                       16.0 * circle_length(data, t - h, nodes) -
                       circle_length(data, t - 2 * h, nodes)) /
                      (12.0 * h * h);
    // zgh and zh/g must not vanish on the circle.
    bool skip = false;
    const double rho = std::exp(t);
    for (int k = 0; k < nodes && !skip; ++k) {
      const Complex z = std::polar(rho, kTwoPi * k / nodes);
      const Complex zh = z * data.h(z);
      const Complex g = data.g(z);
      skip = std::min(std::abs(zh * g), std::abs(zh / g)) < opts.zero_rel * scale;
    }
    p.lengths.push_back(l0);
    p.heights.push_back(p.modulus_mu * t);
    p.skipped.push_back(skip);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    p.second_derivative.push_back(skip ? nan : d2);
    p.geometric_second_derivative.push_back(
        (skip || !p.height_adapted) ? nan : d2 / (p.modulus_mu * p.modulus_mu));
  }
  return p;
}

ConvexityReport convexity_check(const LevelProfile& p) {
  ConvexityReport r{};
  r.min_slack = std::numeric_limits<double>::infinity();
  r.min_geometric_slack = std::numeric_limits<double>::infinity();
  r.geometric_available = p.height_adapted;
  const double k2 = std::pow(kTwoPi / p.flux_vertical, 2);
  for (std::size_t i = 0; i < p.lengths.size(); ++i) {
    if (p.skipped[i]) continue;
    const double slack = p.second_derivative[i] - p.lengths[i];
    r.min_slack = std::min(r.min_slack, slack);
    r.max_relative_slack = std::max(r.max_relative_slack, std::abs(slack) / p.lengths[i]);
    if (p.height_adapted) {
      r.min_geometric_slack =
          std::min(r.min_geometric_slack, p.geometric_second_derivative[i] - k2 * p.lengths[i]);
    }
    ++r.levels_checked;
  }
  if (!p.height_adapted) r.min_geometric_slack = std::numeric_limits<double>::quiet_NaN();
  r.equality_flag = r.levels_checked > 0 && r.max_relative_slack <= 1e-6;
  return r;
}

CpxReport cpx_inequality_check(const LaurentPolynomial& F, double rho, const CpxOptions& opts) {
  if (!(rho > 0.0)) throw DomainError("cpx_inequality_check: rho must be positive");
  if (F.is_zero()) throw PreconditionError("cpx_inequality_check: F is identically zero");
  if (std::abs(F.coefficient(0)) > opts.zero_constant_rel * F.max_abs_coefficient()) {
    throw PreconditionError("cpx_inequality_check: constant Laurent coefficient must vanish");
  }
  // A near-zero can sit between scan points, so every local minimum of the
  // scan is polished by Brent before the modulus test.
  const int scan = 4096;
  auto modulus = [&](double th) { return std::abs(F(std::polar(rho, th))); };
  std::vector<double> m(scan);
  for (int k = 0; k < scan; ++k) m[k] = modulus(kTwoPi * k / scan);
  const double fmax = *std::max_element(m.begin(), m.end());
  double fmin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < scan; ++k) {
    if (m[k] > m[(k + 1) % scan] || m[k] > m[(k + scan - 1) % scan]) continue;
    const double step = kTwoPi / scan;
    const auto r = boost::math::tools::brent_find_minima(modulus, (k - 1) * step, (k + 1) * step, 52);
    fmin = std::min({fmin, m[k], r.second});
  }
  if (fmin < opts.min_modulus_rel * fmax) {
    throw PreconditionError("cpx_inequality_check: F vanishes (or nearly) on the circle");
  }
  auto sums = [&](int n) {
    double lhs = 0.0;
    double rhs = 0.0;
    for (int k = 0; k < n; ++k) {
      const Complex z = std::polar(rho, kTwoPi * k / n);
      const double af = std::abs(F(z));
      lhs += rho * rho * std::norm(F.derivative(z)) / af;
      rhs += af;
    }
    return std::pair{lhs * kTwoPi / n, rhs * kTwoPi / n};
  };
  // A zero at distance d from the circle needs roughly 30 rho / d nodes.
  int n = opts.start_nodes;
  auto prev = sums(n);
  double change = std::numeric_limits<double>::infinity();
  while (true) {
    const int n2 = 2 * n;
    if (n2 > opts.max_nodes) {
      throw ResolutionError("cpx_inequality_check: quadrature did not converge", change);
    }
    auto cur = sums(n2);
    const double dl = std::abs(cur.first - prev.first) / std::abs(cur.first);
    const double dr = std::abs(cur.second - prev.second) / std::abs(cur.second);
    change = std::max(dl, dr);
    n = n2;
    prev = cur;
    if (change <= opts.converge_rel) break;
  }
  return {prev.first, prev.second, prev.first - prev.second, n};
}

DecompositionReport second_derivative_decomposition(const SampledAnnulus& a, int level) {
  if (!a.height_adapted) {
    throw PreconditionError("second_derivative_decomposition: annulus levels are not horizontal");
  }
  if (level < 1 || level + 1 >= a.levels) {
    throw PreconditionError("second_derivative_decomposition: level needs neighbours");
  }
  const int n = a.angles;
  const double dth = kTwoPi / n;
  const double dx = a.modulus_mu * a.delta_t();
  auto length = [&](int i) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k) acc += a.metric_factor[a.index(i, k)];
    return acc * dth;
  };

  DecompositionReport r{};
  r.length = length(level);
  if (level >= 2 && level + 2 < a.levels) {
    r.fd_value = (-length(level + 2) + 16.0 * length(level + 1) - 30.0 * r.length +
                  16.0 * length(level - 1) - length(level - 2)) /
                 (12.0 * dx * dx);
  } else {
    r.fd_value = (length(level + 1) - 2.0 * r.length + length(level - 1)) / (dx * dx);
  }

  std::vector<double> lam(n);
  std::vector<double> inv_grad(n);
  std::vector<double> coord[3];
  for (auto& c : coord) c.resize(n);
  for (int k = 0; k < n; ++k) {
    const int idx = a.index(level, k);
    lam[k] = a.metric_factor[idx];
    const double gx3 =
        std::hypot(a.tangent_t[idx].z(), a.tangent_theta[idx].z()) / lam[k];  // |grad x3|
    inv_grad[k] = 1.0 / gx3;
    for (int j = 0; j < 3; ++j) coord[j][k] = a.points[idx][j];
  }

  // The level must be resolved by its own angular samples.
  {
    std::vector<Complex> s(lam.begin(), lam.end());
    const std::vector<Complex> spec = numerics::fft(s);
    double tail = 0.0;
    for (int k = 0; k < n; ++k) {
      if (std::abs(numerics::wavenumber(k, n)) > n / 4) tail = std::max(tail, std::abs(spec[k]));
    }
    const double rel = tail / std::abs(spec[0]);
    if (rel > 1e-10) {
      throw ResolutionError("second_derivative_decomposition: level under-resolved", rel);
    }
  }

  const std::vector<double> dinv = numerics::spectral_derivative(inv_grad, 1, kTwoPi);
  std::vector<double> d1[3];
  std::vector<double> d2[3];
  for (int j = 0; j < 3; ++j) {
    d1[j] = numerics::spectral_derivative(coord[j], 1, kTwoPi);
    d2[j] = numerics::spectral_derivative(coord[j], 2, kTwoPi);
  }
  for (int k = 0; k < n; ++k) {
    const int idx = a.index(level, k);
    const Eigen::Vector3d xth(d1[0][k], d1[1][k], d1[2][k]);
    const Eigen::Vector3d xthth(d2[0][k], d2[1][k], d2[2][k]);
    const double speed = xth.norm();
    const double kappa = xth.cross(xthth).norm() / (speed * speed * speed);
    const double beta = a.second_form[idx](0, 1) / (lam[k] * lam[k]);
    const double w2 = inv_grad[k] * inv_grad[k];
    // ds = lam dtheta, d/ds = (1/lam) d/dtheta.
    r.gradient_term += dinv[k] * dinv[k] / lam[k] * dth;
    r.curvature_term += kappa * kappa * w2 * lam[k] * dth;
    r.beta_term += beta * beta * w2 * lam[k] * dth;
  }
  r.formula_value = r.gradient_term + r.curvature_term + r.beta_term;
  r.relative_error = std::abs(r.fd_value - r.formula_value) / std::abs(r.fd_value);
  return r;
}

// ---------------------------------------------------------------------------

AreaReport area_comparison(const WeierstrassData& data, const Slab& slab, const AreaOptions& opts) {
  validate(data);
  if (!data.height_adapted()) {
    throw DomainError("area_comparison: data must be height-adapted (dh = mu dz / z)");
  }
  const double mu = data.h.coefficient(-1).real();
  const double x_lo = mu * std::log(data.r_inner);
  const double x_hi = mu * std::log(data.r_outer);
  const double slack = 1e-12 * std::max(1.0, x_hi - x_lo);
  if (slab.lower() < x_lo - slack || slab.upper() > x_hi + slack) {
    throw DomainError("area_comparison: annulus does not span the slab");
  }
  const int n = opts.angle_nodes;
  auto area_density = [&](double t) {  // oint Lambda^2 dtheta
    const double rho = std::exp(t);
    double acc = 0.0;
    for (int k = 0; k < n; ++k) {
      const double lam = conformal_factor(data, std::polar(rho, kTwoPi * k / n));
      acc += lam * lam;
    }
    return acc * kTwoPi / n;
  };
  AreaReport r{};
  r.flux_vertical = kTwoPi * mu;
  r.area_sigma = numerics::integrate_gauss(area_density, slab.lower() / mu, slab.upper() / mu,
                                           opts.gauss_nodes, opts.gauss_panels);

  auto level_len = [&](double x) { return circle_length(data, x / mu, n); };
  const auto [x_min, l_min] = boost::math::tools::brent_find_minima(
      level_len, slab.lower(), slab.upper(), std::numeric_limits<double>::digits / 2);
  (void)l_min;
  // Brent stops at sqrt(eps) in x; Newton on the centred derivative refines it.
  double x = x_min;
  const double d = 1e-4 * std::max(1.0, slab.height());
  for (int it = 0; it < 4; ++it) {
    if (x - d < slab.lower() || x + d > slab.upper()) break;
    const double lp = level_len(x + d);
    const double l0 = level_len(x);
    const double lm = level_len(x - d);
    const double curv = lp - 2.0 * l0 + lm;
    if (!(curv > 0.0)) break;
    const double step = 0.5 * d * (lp - lm) / curv;
    if (std::abs(step) > d) break;
    x -= step;
  }
  r.neck_height = x;
  const CatenoidPiece comparison(mu, r.neck_height, slab);
  r.area_catenoid = catenoid::area_in_slab(comparison);
  r.gap = r.area_sigma - r.area_catenoid;

  r.min_level_gap = std::numeric_limits<double>::infinity();
  for (double x : numerics::linspace(slab.lower(), slab.upper(), opts.comparison_levels)) {
    const double ls = level_len(x);
    const double lc = catenoid::level_length(comparison, x);
    r.level_heights.push_back(x);
    r.level_sigma.push_back(ls);
    r.level_catenoid.push_back(lc);
    r.min_level_gap = std::min(r.min_level_gap, (ls - lc) / lc);
  }
  return r;
}

CoareaCheck coarea_check(const WeierstrassData& data, double height, int nodes) {
  if (!data.height_adapted()) {
    throw DomainError("coarea_check: data must be height-adapted");
  }
  const double mu = data.h.coefficient(-1).real();
  const double rho = std::exp(height / mu);
  const double dth = kTwoPi / nodes;
  double rate = 0.0;
  double len = 0.0;
  double mean_grad = 0.0;
  std::vector<double> grad(nodes);
  std::vector<double> lam(nodes);
  for (int k = 0; k < nodes; ++k) {
    const Complex z = std::polar(rho, kTwoPi * k / nodes);
    lam[k] = conformal_factor(data, z);
    const Complex zh = z * data.h(z);
    grad[k] = std::abs(zh) / lam[k];  // |grad x3| = |d x3| / Lambda
    rate += lam[k] / grad[k] * dth;
    len += lam[k] * dth;
    mean_grad += grad[k] * lam[k] * dth;
  }
  mean_grad /= len;
  double var = 0.0;
  for (int k = 0; k < nodes; ++k) var += std::pow(grad[k] - mean_grad, 2) * lam[k] * dth;
  return {rate, len * len / (kTwoPi * mu), var / len};
}

// ---------------------------------------------------------------------------

WeierstrassData project_residues(WeierstrassData data) {
  check_radii(data);
  const double b_main = data.h.coefficient(-1).real();
  if (!(b_main > 0.0)) {
    throw DataInvalidError("project_residues: Res(h) must be positive", b_main);
  }
  data.h.set(-1, b_main);

  const double rho = data.geometric_mean_radius();
  const int n = 1024;
  const auto& g = data.g;
  const std::vector<Complex> inv =
      circle_laurent_coefficients([&](Complex z) { return 1.0 / g(z); }, rho, n);
  auto inv_coef = [&](int p) {
    if (2 * std::abs(p) >= n) return Complex(0.0);
    return inv[p >= 0 ? p : p + n];
  };

  // Res(g h) = sum_n b_n g_{-1-n},  Res(h / g) = sum_n b_n c_{-1-n}.
  Complex r1 = 0.0;
  Complex r2 = 0.0;
  for (const auto& [p, b] : data.h.terms()) {
    r1 += b * g.coefficient(-1 - p);
    r2 += b * inv_coef(-1 - p);
  }

  const int candidates[] = {-3, -2, 0, 1};
  double best = 0.0;
  int bp = 0;
  int bq = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const int p = candidates[i];
      const int q = candidates[j];
      const Complex det = g.coefficient(-1 - p) * inv_coef(-1 - q) -
                          g.coefficient(-1 - q) * inv_coef(-1 - p);
      if (std::abs(det) > best) {
        best = std::abs(det);
        bp = p;
        bq = q;
      }
    }
  }
  if (best < 1e-12) throw DataInvalidError("project_residues: singular projection", best);
  const Complex m11 = g.coefficient(-1 - bp);
  const Complex m12 = g.coefficient(-1 - bq);
  const Complex m21 = inv_coef(-1 - bp);
  const Complex m22 = inv_coef(-1 - bq);
  const Complex det = m11 * m22 - m12 * m21;
  const Complex dp = (-r1 * m22 + r2 * m12) / det;
  const Complex dq = (-r2 * m11 + r1 * m21) / det;
  data.h.set(bp, data.h.coefficient(bp) + dp);
  data.h.set(bq, data.h.coefficient(bq) + dq);
  return data;
}

WeierstrassData random_projected_data(std::mt19937_64& rng, const RandomDataOptions& opts) {
  const double ri = opts.r_inner;
  const double ro = opts.r_outer;
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    std::map<int, Complex> gt{{1, 1.0}};
    std::map<int, Complex> ht{{-1, opts.scale}};
    for (int p = opts.min_power; p <= opts.max_power; ++p) {
      if (p != 1) {
        const double norm = std::max(std::pow(ri, p - 1), std::pow(ro, p - 1));
        gt[p] += opts.amplitude * standard_normal_complex(rng) / norm;
      }
      if (p != -1) {
        const double norm = std::max(std::pow(ri, p + 1), std::pow(ro, p + 1));
        ht[p] += opts.scale * opts.amplitude * standard_normal_complex(rng) / norm;
      }
    }
    WeierstrassData d{LaurentPolynomial(gt), LaurentPolynomial(ht), ri, ro};
    d = project_residues(d);
    // Keep the projected h close to scale / z so the immersion stays regular.
    bool ok = true;
    for (const auto& [p, b] : d.h.terms()) {
      if (p == -1) continue;
      const double size = std::abs(b) * std::max(std::pow(ri, p + 1), std::pow(ro, p + 1));
      ok = ok && size <= 0.5 * opts.scale;
    }
    if (!ok || !check_gauss_map(d).nonvanishing) continue;
    if (period_residuals(d).max_relative() > 1e-12) continue;
    return d;
  }
  throw NumericalError("random_projected_data: no admissible sample", 0.0);
}

WeierstrassData random_adapted_data(std::mt19937_64& rng, const RandomDataOptions& opts) {
  const double ri = opts.r_inner;
  const double ro = opts.r_outer;
  const double rho = std::sqrt(ri * ro);
  const int n = 512;
  for (int attempt = 0; attempt < opts.max_attempts; ++attempt) {
    // g = z (1 + sum_k c_k z^k); k = -1 would create a constant term in g.
    std::map<int, Complex> gt{{1, 1.0}};
    for (int k = opts.min_power; k <= opts.max_power; ++k) {
      if (k == 0 || k == -1) continue;
      const double norm = std::max(std::pow(ri, k), std::pow(ro, k));
      gt[k + 1] = opts.amplitude * standard_normal_complex(rng) / norm;
    }
    LaurentPolynomial g(gt);
    // Complex Newton on the z^2 coefficient for [z^0](1/g) = 0.
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      const Complex f = circle_laurent_coefficient([&](Complex z) { return 1.0 / g(z); }, rho, 0, n);
      if (std::abs(f) < 1e-15) {
        converged = true;
        break;
      }
      const Complex df = circle_laurent_coefficient(
          [&](Complex z) {
            const Complex gi = 1.0 / g(z);
            return -z * z * gi * gi;
          },
          rho, 0, n);
      g.set(2, g.coefficient(2) - f / df);
    }
    if (!converged) continue;
    if (std::abs(g.coefficient(2)) * ro > 4.0 * opts.amplitude + 0.5) continue;
    WeierstrassData d{g, LaurentPolynomial::monomial(-1, opts.scale), ri, ro};
    if (!check_gauss_map(d).nonvanishing) continue;
    if (period_residuals(d).max_relative() > 1e-12) continue;
    return d;
  }
  throw NumericalError("random_adapted_data: no admissible sample", 0.0);
}

}  // namespace catvar
