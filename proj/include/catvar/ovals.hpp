#pragma once

#include <random>
#include <vector>

#include <Eigen/Core>

namespace catvar {

enum class CurvatureMethod { automatic, spectral, finite_difference };

// Closed curve sampled at N points for parameter u = k / N in [0, 1). The
// sample after the last one is the first.
class ClosedCurve {
 public:
  // Throws PreconditionError for N < 32, non-finite samples, or a speed
  // below min_speed_rel times the mean speed.
  explicit ClosedCurve(std::vector<Eigen::Vector3d> samples,
                       CurvatureMethod method = CurvatureMethod::automatic,
                       double min_speed_rel = 1e-6);

  int size() const { return static_cast<int>(samples_.size()); }
  const std::vector<Eigen::Vector3d>& samples() const { return samples_; }
  const std::vector<double>& speed() const { return speed_; }       // |dX/du|
  const std::vector<double>& arclength() const { return arclength_; }  // s(u_k), s(0) = 0
  const std::vector<double>& curvature() const { return curvature_; }
  double length() const { return length_; }
  // True when curvature came from Fourier differentiation.
  bool spectral() const { return spectral_; }
  // Largest |Fourier coefficient| in the top half of the band relative to
  // the largest overall, over the three coordinates.
  double spectral_tail() const { return tail_; }

 private:
  std::vector<Eigen::Vector3d> samples_;
  std::vector<double> speed_;
  std::vector<double> arclength_;
  std::vector<double> curvature_;
  double length_ = 0.0;
  double tail_ = 0.0;
  bool spectral_ = true;
};

// Uniform-arclength resampling through the trigonometric interpolant.
ClosedCurve resample_arclength(const ClosedCurve& curve, int n);

// (oint f_s^2 + kappa^2 f^2 ds) / (oint f^2 ds) for per-node values f.
// Works in the curve's own parameter. Throws PreconditionError when
// oint f^2 ds is below eps.
double rayleigh_quotient(const ClosedCurve& curve, const std::vector<double>& f,
                         double eps = 1e-14);

struct OvalOptions {
  int start_nodes = 64;
  int max_nodes = 1024;
  double converge_rel = 1e-8;
};

struct OvalResult {
  double length;
  double lambda1;      // lowest periodic eigenvalue of -d^2/ds^2 + kappa^2
  double functional;   // L^2 lambda1 / (2 pi)^2
  int nodes;           // resolution of the reported value
  double refinement_change;  // |lambda(N) - lambda(N/2)| / |lambda(N)|
};

// Dense Fourier discretization on uniform-arclength samples, doubled until
// consecutive values agree to converge_rel (ResolutionError otherwise).
OvalResult lowest_eigenvalue(const ClosedCurve& curve, const OvalOptions& opts = {});

// Single solve at n uniform-arclength nodes (no refinement study).
double lowest_eigenvalue_at(const ClosedCurve& curve, int n);

// Generators ---------------------------------------------------------------

ClosedCurve circle_curve(double radius, int n);
ClosedCurve ellipse_curve(double a, double b, int n);
// Polar curve r = 1 + amplitude cos(lobes theta) in the plane.
ClosedCurve rounded_polygon_curve(int lobes, double amplitude, int n);
// Unit circle plus random Fourier modes 2..max_mode in all three coordinates,
// coefficients decaying like amplitude / k^2. Planar when `planar` is set.
ClosedCurve random_fourier_curve(std::mt19937_64& rng, int max_mode, double amplitude, int n,
                                 bool planar = false);

}  // namespace catvar
