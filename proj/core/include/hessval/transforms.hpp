#pragma once

#include "hessval/convex_function.hpp"

#include <optional>

namespace hessval {

// Discrete Legendre-Fenchel transform.  Grid inputs use the linear-time
// per-axis conjugate of the sampled max-affine envelope; piecewise-affine
// and indicator inputs are conjugated exactly through their vertices.
// The dual grid must cover the slope range of the input or the conjugate
// is silently clipped; default_dual_box computes a covering box.
ConvexFunction legendre(const ConvexFunction& f, const Vec& dual_lo, const Vec& dual_hi,
                        const std::vector<int>& dual_shape);
ConvexFunction legendre(const ConvexFunction& f);  // auto dual box

void default_dual_box(const ConvexFunction& f, Vec& lo, Vec& hi);

// Closed-form conjugates for the families that have one.
std::optional<ConvexFunction> conjugate_exact(const ConvexFunction& f);

// sup-norm gap between f and its double conjugate on the primal grid
// (restricted to nodes where f is finite).  Zero up to O(h) for convex
// grids; equals the distance to the convex envelope otherwise.
double biconjugate_check(const ConvexFunction& f);

// Moreau-Yosida envelope u box |.|^2/(2 lambda).  Closed form for
// quadratics and radial cones; per-axis parabola envelopes for grids.
ConvexFunction moreau_yosida(const ConvexFunction& u, double lambda);

// Rotational epi-symmetrization via m sampled rotations: the conjugate is
// averaged over rotated copies and conjugated back.  n in {2, 3}; the
// domain of u must be bounded.
ConvexFunction rotational_episymmetrize(const ConvexFunction& u, int rotations);

// 1-D discrete conjugate: out[j] = max_i (y[j] * x[i] - f[i]) over finite
// entries; -inf when no entry is finite.  x and y must be ascending.
void conjugate_line(const std::vector<double>& x, const std::vector<double>& f,
                    const std::vector<double>& y, std::vector<double>& out);

}  // namespace hessval
