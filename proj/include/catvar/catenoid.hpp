#pragma once

#include <Eigen/Core>

namespace catvar {

// Region between two horizontal planes {x3 = lower} and {x3 = upper}.
class Slab {
 public:
  // Throws DomainError unless lower < upper (both finite).
  Slab(double lower, double upper);

  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }
  double height() const noexcept { return upper_ - lower_; }
  double center() const noexcept { return 0.5 * (lower_ + upper_); }
  bool contains(double x3) const noexcept { return x3 >= lower_ && x3 <= upper_; }

  static Slab canonical() { return Slab(-1.0, 1.0); }

 private:
  double lower_;
  double upper_;
};

// The vertical catenoid scale * Cat + offset * e3 clipped to a slab.
struct CatenoidPiece {
  // Throws DomainError unless scale > 0 (finite).
  CatenoidPiece(double scale, double offset, Slab slab);

  double scale;
  double offset;
  Slab slab;
};

// Translation + homothety taking a slab onto [-1, 1]:
//   x3 -> (x3 - center) / half_height.
// Lengths scale by 1 / half_height, areas by 1 / half_height^2.
struct CanonicalReduction {
  double center;
  double half_height;

  static CanonicalReduction of(const Slab& slab);

  // The same catenoid expressed in canonical coordinates.
  CatenoidPiece reduce(const CatenoidPiece& piece) const;
  double reduce_scale(double scale) const { return scale / half_height; }
  double reduce_offset(double offset) const { return (offset - center) / half_height; }
};

namespace catenoid {

// (s cosh((h - t)/s) cos th, s cosh((h - t)/s) sin th, h). Throws
// OutOfRangeError when h lies outside the closed slab.
Eigen::Vector3d parameterize(const CatenoidPiece& piece, double h, double theta);

// Area of the clipped catenoid. On [-1, 1]:
//   A(s, t) = s^2 pi cosh(2t/s) sinh(2/s) + 2 pi s.
// General slabs go through CanonicalReduction.
double area_in_slab(const CatenoidPiece& piece);

// Closed form on the canonical slab, exposed for tests and the CLI.
double canonical_area(double scale, double offset);

// Sum of the circumferences of the two boundary circles.
double boundary_length(const CatenoidPiece& piece);
double canonical_boundary_length(double scale, double offset);

// Circumference of the slice {x3 = height}; OutOfRangeError outside the slab.
double level_length(const CatenoidPiece& piece, double height);

// Vertical flux 2 pi s of the scale-s vertical catenoid.
double vertical_flux(double scale);

struct Lambda0 {
  double value;
  double residual_lambdanot;  // |2l/(1-l^2) - sinh(2/l)|
  double residual_tanh;       // |tanh(1/l) - l|
};

// Unique root in (0, 1) of 2l/(1-l^2) = sinh(2/l), the scale of the
// area-minimizing catenoid piece in [-1, 1].
Lambda0 solve_lambda0();

// 1 - h tanh h: positive on the maximally symmetric marginally stable piece.
double ms_indicator(double height);

// Positive root of t tanh t = 1 (half-height of that piece).
double ms_half_height();

}  // namespace catenoid
}  // namespace catvar
