#pragma once

#include <random>
#include <vector>

#include <Eigen/Core>

#include "catvar/catenoid.hpp"
#include "catvar/laurent.hpp"

namespace catvar {

// Weierstrass data on the annulus r_inner < |z| < r_outer: Gauss map g and
// height differential dh = h(z) dz. The immersion is
//   X = Re \int ( (1/g - g)/2, i (1/g + g)/2, 1 ) h dz.
struct WeierstrassData {
  LaurentPolynomial g;
  LaurentPolynomial h;
  double r_inner = 1.0;
  double r_outer = 2.0;

  // True when dh = mu dz / z with mu > 0, so x3 = mu log|z| and every circle
  // |z| = rho maps into one horizontal plane.
  bool height_adapted() const;
  double geometric_mean_radius() const;
};

// Throws DomainError unless 0 < r_inner < r_outer.
void check_radii(const WeierstrassData& data);

// Scale-s vertical catenoid: g = z, h = s / z.
WeierstrassData catenoid_data(double scale, double r_inner, double r_outer);

// Contour integrals around the core circle (all scaled by 1 / 2 pi).
struct PeriodResiduals {
  double real_period;      // |Re oint dh|
  double closing;          // |oint g dh - conj(oint g^{-1} dh)|
  double vertical_g;       // |oint g dh|
  double vertical_ginv;    // |oint g^{-1} dh|
  double scale;            // mean |h z| on the core circle

  // Largest residual relative to scale, counting the vertical-flux pair.
  double max_relative() const;
  // Closing conditions only (well-defined immersion, any flux direction).
  double max_relative_closing() const;
};

PeriodResiduals period_residuals(const WeierstrassData& data, int samples = 4096);

struct GaussMapCheck {
  int winding_inner;
  int winding_outer;
  double min_modulus;
  bool nonvanishing;
};

// Winding numbers of g on the boundary circles (equal iff g has no zeros in
// the annulus) plus a minimum-modulus scan over `circles` concentric circles.
GaussMapCheck check_gauss_map(const WeierstrassData& data, double eps = 1e-6,
                              int scan = 4096, int circles = 9);

struct DataTolerances {
  double period_rel = 1e-8;
  double gauss_eps = 1e-6;
  double min_flux_rel = 1e-10;  // F3 / scale below this counts as zero flux
};

// Throws DataInvalidError on period/flux residuals, a vanishing Gauss map,
// or zero vertical flux.
void validate(const WeierstrassData& data, const DataTolerances& tol = {});

// Flux of the image of |z| = rho, oriented so the vertical part is >= 0.
Eigen::Vector3d flux_at_radius(const WeierstrassData& data, double rho, int samples = 4096);
Eigen::Vector3d flux(const WeierstrassData& data);

// Rotation taking the flux onto the positive e3 axis. The module expects
// vertical flux; this only reports what rotation the caller must apply.
struct FluxAlignment {
  Eigen::Vector3d flux;
  Eigen::Matrix3d rotation;
  double tilt;  // angle between flux and e3, radians
  bool vertical;
};

FluxAlignment flux_alignment(const WeierstrassData& data, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Immersion
// ---------------------------------------------------------------------------

struct GridSpec {
  int levels = 64;      // log-radius levels, endpoints included
  int angles = 128;     // equispaced angles per level
  int path_nodes = 8;   // Gauss nodes per contour segment
};

struct ImmersionOptions {
  DataTolerances data;
  double metric_eps = 1e-6;    // conformal factor / scale below this is a branch point
  double closure_rel = 1e-7;   // loop-closure tolerance
};

// Sampled immersion on the grid z = exp(t + i theta). All per-node arrays
// are row-major: index(level, angle).
struct SampledAnnulus {
  int levels = 0;
  int angles = 0;
  std::vector<double> log_radii;
  std::vector<double> thetas;
  std::vector<Eigen::Vector3d> points;
  std::vector<Eigen::Vector3d> tangent_t;      // dX/dt
  std::vector<Eigen::Vector3d> tangent_theta;  // dX/dtheta
  std::vector<double> metric_factor;           // |dX/dt| = |dX/dtheta|
  std::vector<Eigen::Vector3d> normal;
  std::vector<Eigen::Matrix2d> second_form;    // in (t, theta)
  double flux_vertical = 0.0;
  double modulus_mu = 0.0;                     // F3 / 2 pi
  double loop_closure_error = 0.0;             // max over levels, relative to F3
  bool height_adapted = false;

  int index(int level, int angle) const { return level * angles + angle; }
  double delta_t() const { return log_radii[1] - log_radii[0]; }
};

// Contour integration from z = r_inner along the positive real axis, then
// around each circle. The additive constant is fixed by the Laurent
// primitive (no constant term), so catenoid data lands on r = s cosh(x3 / s).
// Throws DataInvalidError (period residuals, loop closure),
// BranchPointError (conformal factor below metric_eps * scale) and
// ConfigurationError (grid too small).
SampledAnnulus immerse(const WeierstrassData& data, const GridSpec& grid = {},
                       const ImmersionOptions& opts = {});

// max over nodes of (| |X_t| - |X_theta| | + |X_t . X_theta|) / |X_t|^2.
double conformality_defect(const SampledAnnulus& annulus);

// max over interior nodes of the 5-point Laplacian of X in (t, theta),
// divided by the largest |X| on the grid.
double harmonicity_defect(const SampledAnnulus& annulus);

// (1 / 2 pi) oint dx3/dt dtheta on one level: the modulus measured from the
// immersion, to be compared with F3 / 2 pi.
double measured_modulus(const SampledAnnulus& annulus, int level);

// ---------------------------------------------------------------------------
// Level lengths and convexity
// ---------------------------------------------------------------------------

struct ProfileOptions {
  int quad_nodes = 512;
  int max_refinements = 5;
  double resolution_rel = 1e-8;  // N vs 2N agreement
  double fd_step = 1e-3;         // 5-point stencil step in log-radius
  double zero_rel = 1e-9;        // |zgh| or |zh/g| below this * scale: level skipped
};

struct LevelProfile {
  std::vector<double> log_radii;
  std::vector<double> heights;                  // mu * t (geometric, adapted data)
  std::vector<double> lengths;                  // L(t)
  std::vector<double> second_derivative;        // L''(t), NaN when skipped
  std::vector<double> geometric_second_derivative;  // d^2/dx^2 H1(Sigma_x), adapted data
  std::vector<bool> skipped;
  double flux_vertical = 0.0;
  double modulus_mu = 0.0;
  bool height_adapted = false;
  double fd_step = 0.0;
};

// Length of the image of |z| = e^t: (1/2) oint (|z g h| + |z h / g|) dtheta.
double circle_length(const WeierstrassData& data, double t, int nodes);

// Profile on num_levels equispaced log-radii, kept 2 fd_step inside the
// annulus. Throws ResolutionError if the quadrature does not settle.
LevelProfile level_profile(const WeierstrassData& data, int num_levels,
                           const ProfileOptions& opts = {});

struct ConvexityReport {
  double min_slack;             // min L'' - L
  double max_relative_slack;    // max |L'' - L| / L
  double min_geometric_slack;   // min d2H - (2 pi / F3)^2 H (adapted data)
  bool geometric_available;
  bool equality_flag;           // max_relative_slack <= 1e-6
  int levels_checked;
};

ConvexityReport convexity_check(const LevelProfile& profile);

struct CpxReport {
  double lhs;  // oint rho^2 |F'|^2 / |F| dtheta
  double rhs;  // oint |F| dtheta
  double slack;
  int nodes;
};

struct CpxOptions {
  double min_modulus_rel = 1e-6;
  double zero_constant_rel = 1e-12;
  double converge_rel = 1e-13;
  int start_nodes = 1024;
  int max_nodes = 1 << 20;
};

// Holomorphic inequality for F with zero constant term and no zeros on
// |z| = rho. Throws PreconditionError otherwise.
CpxReport cpx_inequality_check(const LaurentPolynomial& F, double rho,
                               const CpxOptions& opts = {});

struct DecompositionReport {
  double fd_value;        // finite difference of H1(Sigma_x) in height
  double formula_value;   // gradient + curvature + beta terms
  double gradient_term;   // oint |grad_{Sigma_x} (1/|grad x3|)|^2
  double curvature_term;  // oint kappa^2 / |grad x3|^2
  double beta_term;       // oint A(nu, E2)^2 / |grad x3|^2
  double length;          // H1(Sigma_x)
  double relative_error;  // |fd - formula| / |fd|
};

// Curve case of the second variation of level-set length on a height-adapted
// annulus. Requires level_index to have neighbours on both sides.
DecompositionReport second_derivative_decomposition(const SampledAnnulus& annulus,
                                                    int level_index);

// ---------------------------------------------------------------------------
// Area comparison
// ---------------------------------------------------------------------------

struct AreaOptions {
  int angle_nodes = 512;
  int gauss_nodes = 16;
  int gauss_panels = 32;
  int comparison_levels = 65;
};

struct AreaReport {
  double area_sigma;
  double area_catenoid;
  double gap;                 // area_sigma - area_catenoid
  double neck_height;         // argmin of the level length over the slab
  double flux_vertical;
  std::vector<double> level_heights;
  std::vector<double> level_sigma;
  std::vector<double> level_catenoid;
  double min_level_gap;       // min (H1(Sigma_x) - H1(C_x)) / H1(C_x)
};

// Area of the part of the annulus inside the slab against the vertical
// catenoid of equal flux with its neck at the shortest level. Needs
// height-adapted data whose height range covers the slab (DomainError).
AreaReport area_comparison(const WeierstrassData& data, const Slab& slab,
                           const AreaOptions& opts = {});

struct CoareaCheck {
  double area_rate;     // d/dx area = oint 1 / |grad x3|
  double lower_bound;   // H1(Sigma_x)^2 / F3
  double grad_variance; // variance of |grad x3| along the level
};

CoareaCheck coarea_check(const WeierstrassData& data, double height, int nodes = 512);

// ---------------------------------------------------------------------------
// Data generation
// ---------------------------------------------------------------------------

// Makes Re Res(h) = h_{-1} real and zeroes Res(g h), Res(h / g) by solving for
// two more h coefficients (chosen among powers -3, -2, 0, 1 for the best
// conditioned 2x2 system). Throws DataInvalidError when h_{-1} <= 0.
WeierstrassData project_residues(WeierstrassData data);

struct RandomDataOptions {
  double scale = 1.0;        // vertical flux / 2 pi
  double r_inner = 0.4;
  double r_outer = 2.5;
  double amplitude = 0.05;   // relative size of each perturbation term
  int min_power = -3;
  int max_power = 3;
  int max_attempts = 100;
};

// Perturbed catenoid data with random g and h, then project_residues.
WeierstrassData random_projected_data(std::mt19937_64& rng, const RandomDataOptions& opts);

// Height-adapted data: h = scale / z and g = z (1 + sum c_k z^k) with the
// constant terms of g and 1/g driven to zero (complex Newton on c_1).
WeierstrassData random_adapted_data(std::mt19937_64& rng, const RandomDataOptions& opts);

}  // namespace catvar
