#include "catvar/laurent.hpp"

#include <algorithm>
#include <cmath>

#include "catvar/errors.hpp"
#include "catvar/numerics.hpp"

namespace catvar {

LaurentPolynomial::LaurentPolynomial(std::map<int, Complex> terms) : terms_(std::move(terms)) {
  rebuild();
}

LaurentPolynomial LaurentPolynomial::monomial(int power, Complex coeff) {
  return LaurentPolynomial({{power, coeff}});
}

void LaurentPolynomial::rebuild() {
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (it->second == Complex(0.0)) {
      it = terms_.erase(it);
    } else {
      ++it;
    }
  }
  dense_.clear();
  if (terms_.empty()) {
    min_power_ = 0;
    return;
  }
  min_power_ = terms_.begin()->first;
  dense_.assign(terms_.rbegin()->first - min_power_ + 1, Complex(0.0));
  for (const auto& [p, c] : terms_) dense_[p - min_power_] = c;
}

Complex LaurentPolynomial::operator()(Complex z) const {
  if (dense_.empty()) return 0.0;
  Complex acc = 0.0;
  for (auto it = dense_.rbegin(); it != dense_.rend(); ++it) acc = acc * z + *it;
  return acc * std::pow(z, min_power_);
}

Complex LaurentPolynomial::derivative(Complex z) const {
  if (dense_.empty()) return 0.0;
  // d/dz sum c_j z^(m+j) = z^(m-1) sum (m+j) c_j z^j
  Complex acc = 0.0;
  for (int j = static_cast<int>(dense_.size()) - 1; j >= 0; --j) {
    acc = acc * z + static_cast<double>(min_power_ + j) * dense_[j];
  }
  return acc * std::pow(z, min_power_ - 1);
}

Complex LaurentPolynomial::coefficient(int power) const {
  auto it = terms_.find(power);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void LaurentPolynomial::set(int power, Complex value) {
  terms_[power] = value;
  rebuild();
}

int LaurentPolynomial::min_power() const { return terms_.empty() ? 0 : terms_.begin()->first; }

int LaurentPolynomial::max_power() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first;
}

double LaurentPolynomial::max_abs_coefficient() const {
  double m = 0.0;
  for (const auto& [p, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

LaurentPolynomial LaurentPolynomial::scaled(Complex factor) const {
  std::map<int, Complex> t = terms_;
  for (auto& [p, c] : t) c *= factor;
  return LaurentPolynomial(std::move(t));
}

std::vector<Complex> circle_laurent_coefficients(const std::function<Complex(Complex)>& f,
                                                 double rho, int n) {
  std::vector<Complex> samples(n);
  for (int k = 0; k < n; ++k) {
    samples[k] = f(std::polar(rho, numerics::kTwoPi * k / n));
  }
  std::vector<Complex> spec = numerics::fft(samples);
  for (int k = 0; k < n; ++k) {
    const int w = numerics::wavenumber(k, n);
    spec[k] /= static_cast<double>(n) * std::pow(rho, w);
  }
  return spec;
}

Complex circle_laurent_coefficient(const std::function<Complex(Complex)>& f, double rho,
                                   int power, int n) {
  if (2 * std::abs(power) >= n) {
    throw ConfigurationError("circle_laurent_coefficient: too few samples for power");
  }
  // Direct projection; same value as the FFT bin, without the full transform.
  Complex acc = 0.0;
  for (int k = 0; k < n; ++k) {
    const double th = numerics::kTwoPi * k / n;
    acc += f(std::polar(rho, th)) * std::polar(1.0, -power * th);
  }
  return acc / (static_cast<double>(n) * std::pow(rho, power));
}

Complex circle_residue(const std::function<Complex(Complex)>& f, double rho, int n) {
  return circle_laurent_coefficient(f, rho, -1, n);
}

}  // namespace catvar
