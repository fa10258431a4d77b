#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "catvar/errors.hpp"

namespace catvar::numerics {

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Root finding
// ---------------------------------------------------------------------------

struct RootOptions {
  double bracket_width = 1e-8;   // bisection stops once the bracket is this narrow
  double residual_tol = 1e-12;   // Newton polish target on |f|
  int max_bisections = 400;
  int max_newton = 60;
};

struct RootResult {
  double root = 0.0;
  double residual = 0.0;  // |f(root)|
  int iterations = 0;
};

// Bracketed bisection followed by safeguarded Newton. Requires a sign change
// on [lo, hi]. Newton steps leaving the current bracket fall back to bisection.
// Throws NumericalError when there is no sign change.
RootResult bracketed_newton(const std::function<double(double)>& f,
                            const std::function<double(double)>& df, double lo,
                            double hi, const RootOptions& opts = {});

// Pure bisection on a monotone predicate: returns the boundary x in [lo, hi]
// where pred switches from false to true, resolved to floating-point
// adjacency, a bracket narrower than abs_tol, or max_iter halvings.
double bisect_predicate(const std::function<bool(double)>& pred, double lo, double hi,
                        double abs_tol = 0.0, int max_iter = 2000);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule with n points (n >= 1).
GaussRule gauss_legendre(int n);

// Composite Gauss-Legendre on [a, b] with `panels` equal panels.
double integrate_gauss(const std::function<double(double)>& f, double a, double b,
                       int nodes_per_panel, int panels = 1);

// Mean of periodic samples; times the period this is the trapezoid rule.
double periodic_mean(std::span<const double> samples);
Complex periodic_mean(std::span<const Complex> samples);

// ---------------------------------------------------------------------------
// Fourier helpers (uniform periodic samples on [0, period))
// ---------------------------------------------------------------------------

std::vector<Complex> fft(std::span<const Complex> samples);
std::vector<Complex> ifft(std::span<const Complex> spectrum);

// Integer wavenumber of FFT bin k for an N-point transform.
int wavenumber(int k, int n);

// d^order/du^order of the trigonometric interpolant of real samples over a
// period of length `period`. Odd derivatives drop the Nyquist mode.
std::vector<double> spectral_derivative(std::span<const double> samples, int order,
                                        double period);

// Trigonometric interpolant of real periodic samples, evaluable anywhere.
class TrigInterpolant {
 public:
  TrigInterpolant(std::span<const double> samples, double period);

  double value(double u) const;
  double derivative(double u, int order = 1) const;
  // Antiderivative with zero at u = 0; the mean term contributes linearly.
  double integral(double u) const;
  double mean() const { return mean_; }
  double period() const { return period_; }

 private:
  double period_;
  double mean_;
  std::vector<int> waves_;
  std::vector<Complex> coeffs_;  // c_k for each retained wave (Nyquist split evenly)
};

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

std::vector<double> linspace(double a, double b, int n);
std::vector<double> logspace(double a, double b, int n);  // geometric from a to b

// x * cosh(y) for x > 0 evaluated in exponential form so that it stays finite
// whenever the product is representable.
double scaled_cosh(double x, double y);

}  // namespace catvar::numerics
