#include "catvar/numerics.hpp"

#include <algorithm>
#include <limits>
#include <unsupported/Eigen/FFT>

namespace catvar::numerics {

RootResult bracketed_newton(const std::function<double(double)>& f,
                            const std::function<double(double)>& df, double lo,
                            double hi, const RootOptions& opts) {
  if (lo > hi) std::swap(lo, hi);
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, 0.0, 0};
  if (fhi == 0.0) return {hi, 0.0, 0};
  if (std::signbit(flo) == std::signbit(fhi)) {
    throw NumericalError("bracketed_newton: no sign change on bracket",
                         std::min(std::abs(flo), std::abs(fhi)));
  }

  int iterations = 0;
  while (hi - lo > opts.bracket_width && iterations < opts.max_bisections) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    ++iterations;
    if (fm == 0.0) return {mid, 0.0, iterations};
    if (std::signbit(fm) == std::signbit(flo)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }

  double x = 0.5 * (lo + hi);
  double fx = f(x);
  double best = x;
  double best_res = std::abs(fx);
  for (int k = 0; k < opts.max_newton && best_res > 0.0; ++k) {
    ++iterations;
    const double d = df(x);
    double next = (d != 0.0) ? x - fx / d : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == x) break;
    const double fn = f(next);
    if (std::signbit(fn) == std::signbit(flo)) {
      lo = next;
      flo = fn;
    } else {
      hi = next;
    }
    x = next;
    fx = fn;
    if (std::abs(fx) < best_res) {
      best = x;
      best_res = std::abs(fx);
    } else if (best_res <= opts.residual_tol) {
      break;  // at the floating-point floor
    }
  }
  return {best, best_res, iterations};
}

double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        double abs_tol, int max_iter) {
  for (int i = 0; i < max_iter && hi - lo > abs_tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (pred(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ConfigurationError("gauss_legendre: need at least one node");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

double integrate_gauss(const std::function<double(double)>& f, double a, double b,
                       int nodes_per_panel, int panels) {
  if (panels < 1) throw ConfigurationError("integrate_gauss: need at least one panel");
  const GaussRule rule = gauss_legendre(nodes_per_panel);
  const double width = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    const double mid = lo + 0.5 * width;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      acc += rule.weights[i] * f(mid + 0.5 * width * rule.nodes[i]);
    }
    total += 0.5 * width * acc;
  }
  return total;
}

double periodic_mean(std::span<const double> samples) {
  double acc = 0.0;
  for (double v : samples) acc += v;
  return acc / static_cast<double>(samples.size());
}

Complex periodic_mean(std::span<const Complex> samples) {
  Complex acc = 0.0;
  for (const Complex& v : samples) acc += v;
  return acc / static_cast<double>(samples.size());
}

std::vector<Complex> fft(std::span<const Complex> samples) {
  Eigen::FFT<double> engine;
  std::vector<Complex> in(samples.begin(), samples.end());
  std::vector<Complex> out;
  engine.fwd(out, in);
  return out;
}

std::vector<Complex> ifft(std::span<const Complex> spectrum) {
  Eigen::FFT<double> engine;
  std::vector<Complex> in(spectrum.begin(), spectrum.end());
  std::vector<Complex> out;
  engine.inv(out, in);
  return out;
}

int wavenumber(int k, int n) { return (k <= n / 2) ? k : k - n; }

std::vector<double> spectral_derivative(std::span<const double> samples, int order,
                                        double period) {
  const int n = static_cast<int>(samples.size());
  std::vector<Complex> in(samples.begin(), samples.end());
  std::vector<Complex> spec = fft(in);
  const double scale = kTwoPi / period;
  for (int k = 0; k < n; ++k) {
    const int w = wavenumber(k, n);
    if (n % 2 == 0 && k == n / 2 && order % 2 == 1) {
      spec[k] = 0.0;
      continue;
    }
    spec[k] *= std::pow(Complex(0.0, scale * w), order);
  }
  std::vector<Complex> back = ifft(spec);
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = back[k].real();
  return out;
}

TrigInterpolant::TrigInterpolant(std::span<const double> samples, double period)
    : period_(period) {
  const int n = static_cast<int>(samples.size());
  std::vector<Complex> in(samples.begin(), samples.end());
  std::vector<Complex> spec = fft(in);
  mean_ = spec[0].real() / n;
  for (int k = 1; k < n; ++k) {
    int w = wavenumber(k, n);
    Complex c = spec[k] / static_cast<double>(n);
    if (n % 2 == 0 && k == n / 2) {
      // Split the Nyquist mode symmetrically so the interpolant is real.
      waves_.push_back(w);
      coeffs_.push_back(0.5 * c);
      waves_.push_back(-w);
      coeffs_.push_back(0.5 * c);
      continue;
    }
    waves_.push_back(w);
    coeffs_.push_back(c);
  }
}

double TrigInterpolant::value(double u) const { return derivative(u, 0); }

double TrigInterpolant::derivative(double u, int order) const {
  const double omega = kTwoPi / period_;
  Complex acc = (order == 0) ? Complex(mean_) : Complex(0.0);
  for (std::size_t i = 0; i < waves_.size(); ++i) {
    const double kw = omega * waves_[i];
    acc += coeffs_[i] * std::pow(Complex(0.0, kw), order) * std::polar(1.0, kw * u);
  }
  return acc.real();
}

double TrigInterpolant::integral(double u) const {
  const double omega = kTwoPi / period_;
  Complex acc = mean_ * u;
  for (std::size_t i = 0; i < waves_.size(); ++i) {
    const double kw = omega * waves_[i];
    acc += coeffs_[i] * (std::polar(1.0, kw * u) - 1.0) / Complex(0.0, kw);
  }
  return acc.real();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = a;
    return out;
  }
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  out[n - 1] = b;
  return out;
}

std::vector<double> logspace(double a, double b, int n) {
  std::vector<double> out = linspace(std::log(a), std::log(b), n);
  for (double& v : out) v = std::exp(v);
  out.front() = a;
  out.back() = b;
  return out;
}

double scaled_cosh(double x, double y) {
  const double ay = std::abs(y);
  if (ay < 20.0) return x * std::cosh(ay);
  // cosh(y) = e^{|y|} (1 + e^{-2|y|}) / 2
  return 0.5 * std::exp(std::log(x) + ay) * (1.0 + std::exp(-2.0 * ay));
}

}  // namespace catvar::numerics
