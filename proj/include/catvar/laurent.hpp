#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

namespace catvar {

using Complex = std::complex<double>;

// Finite Laurent polynomial sum_n c_n z^n.
class LaurentPolynomial {
 public:
  LaurentPolynomial() = default;
  explicit LaurentPolynomial(std::map<int, Complex> terms);

  static LaurentPolynomial monomial(int power, Complex coeff);

  Complex operator()(Complex z) const;
  Complex derivative(Complex z) const;

  Complex coefficient(int power) const;
  void set(int power, Complex value);
  const std::map<int, Complex>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  int min_power() const;
  int max_power() const;
  double max_abs_coefficient() const;

  LaurentPolynomial scaled(Complex factor) const;

  friend bool operator==(const LaurentPolynomial&, const LaurentPolynomial&) = default;

 private:
  void rebuild();

  std::map<int, Complex> terms_;
  int min_power_ = 0;
  std::vector<Complex> dense_;  // coefficients from min_power_ upward
};

// Laurent coefficients a_n of a function holomorphic near |z| = rho, from
// the FFT of n equispaced samples. Entry k holds the coefficient of
// z^wavenumber(k, n).
std::vector<Complex> circle_laurent_coefficients(const std::function<Complex(Complex)>& f,
                                                 double rho, int n);

// Single coefficient of z^power (same sampling).
Complex circle_laurent_coefficient(const std::function<Complex(Complex)>& f, double rho,
                                   int power, int n);

// Residue (coefficient of z^-1): (1 / 2 pi i) times the contour integral.
Complex circle_residue(const std::function<Complex(Complex)>& f, double rho, int n);

}  // namespace catvar
