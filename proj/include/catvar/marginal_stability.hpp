#pragma once

#include <vector>

#include "catvar/catenoid.hpp"

namespace catvar {

// Heights where the cones from the apex (0, 0, apex_height) touch the unit
// catenoid. The tangent line to r = cosh(x3) at height t meets the axis at
// t - coth(t), so both heights solve t - coth(t) = apex_height.
struct ConeTangency {
  double apex_height;
  double t_plus;   // > 0
  double t_minus;  // < 0
};

struct JacobiSpectrumResult {
  double lowest_eigenvalue;
  std::vector<double> eigenfunction_samples;  // normalized to max |u| = 1
  int mesh_size;
};

namespace stability {

ConeTangency tangent_cone_heights(double apex_height);

// Unit-scale piece between the two tangency heights.
CatenoidPiece cat_ms(double apex_height);

// u(h; z) = 1 - (h - z) tanh(h): normal part of the dilation field about
// the apex. Solves u'' + 2 sech^2(h) u = 0 and vanishes at t_minus, t_plus.
double dilation_jacobi_field(double apex_height, double height);

struct EigenOptions {
  int mesh_size = 4096;   // nodes on [a, b], endpoints included
  int angular_mode = 0;   // Fourier mode k of the Jacobi field u(s) cos(k th)
};

// Lowest Dirichlet eigenvalue mu of
//   -u'' + (k^2 - 2 sech^2 s) u = mu cosh^2(s) u  on (a, b)
// for the unit catenoid clipped to [a, b] (conformal height coordinate).
// Numerov shooting from u(a) = 0 with bisection on mu over the sign pattern
// of the shot solution. mu > 0 stable, mu = 0 marginal, mu < 0 unstable.
// Requires a unit-scale, zero-offset piece; throws ConfigurationError for
// fewer than 16 mesh nodes.
JacobiSpectrumResult lowest_jacobi_eigenvalue(const CatenoidPiece& piece,
                                              const EigenOptions& opts = {});

// Same interval, second-order finite differences: the symmetric tridiagonal
// pencil is solved by Sturm-sequence bisection. Independent cross-check of
// the shooting solver.
double lowest_jacobi_eigenvalue_fd(double a, double b, int interior_nodes,
                                   int angular_mode = 0);

// Unit-catenoid height interval [a, b] covered by an arbitrary vertical
// piece; stability is invariant under the homothety taking it there.
CatenoidPiece unit_normalized(const CatenoidPiece& piece);

}  // namespace stability
}  // namespace catvar
