#pragma once

#include <vector>

#include "catvar/catenoid.hpp"

namespace catvar {

// A marginally stable vertical catenoid piece spanning a slab: the image of
// Cat_MS(apex) under x -> scale * x + offset * e3.
struct MsSolution {
  double scale;
  double offset;
  double lower_length;  // circumference on the lower plane
  double upper_length;  // circumference on the upper plane
  double apex_height;   // apex z of the underlying unit-catenoid piece
  Slab slab;

  CatenoidPiece piece() const { return CatenoidPiece(scale, offset, slab); }
};

struct SpanningOptions {
  double tangential_rel_tol = 1e-6;  // |L+ - F(L-)| / F(L-) below this is reported as tangential
  double dedup_tol = 1e-7;           // |d scale| + |d offset| merge radius
};

struct SpanningResult {
  std::vector<CatenoidPiece> pieces;
  double threshold;     // F(L-)
  double relative_gap;  // (L+ - F(L-)) / F(L-)
  bool tangential;      // within the tangential band; pieces holds the marginal one
};

namespace thresholds {

// Marginal piece built from the cone apex z; scale and offset fitted so
// that the piece spans exactly the slab.
MsSolution ms_piece_for_apex(double apex_height, const Slab& slab);

// The marginal piece whose lower boundary circle has the given length.
// Outer bisection on the apex height (lower length is strictly decreasing
// in it). Throws DomainError for nonpositive length, NumericalError if the
// final relative residual exceeds 1e-10.
MsSolution ms_piece_for_lower_length(double lower_length, const Slab& slab);

// Least upper boundary length of a vertical catenoid spanning the slab
// with the given lower boundary length.
double f_omega(double lower_length, const Slab& slab);

// Total boundary length of the symmetric marginal piece (apex at the slab's
// mid-plane). Below it no connected minimal surface spans the planes.
double l_crit(const Slab& slab);

// Every vertical catenoid piece whose boundary circles have lengths L- on
// the lower plane and L+ on the upper plane. Empty below F(L-), two pieces
// above it, and the marginal piece with `tangential` set inside the band.
SpanningResult spanning_catenoids(double lower_length, double upper_length, const Slab& slab,
                                  const SpanningOptions& opts = {});

// Upper length of the catenoid with lower length L- whose lower circle sits
// at unit-catenoid height a. Exposed for oracles and sweeps.
double upper_length_at(double lower_length, double a, const Slab& slab);

}  // namespace thresholds
}  // namespace catvar
