#pragma once

#include "hessval/zeta_profile.hpp"

namespace hessval {

// Forward Abel transform  A zeta(t) = int_t^inf s zeta(s) / sqrt(s^2 - t^2) ds.
// The substitution u = sqrt(s^2 - t^2) removes the endpoint singularity.
double abel_forward(const ZetaProfile& zeta, double t);

// Inverse transform  -2/pi int_s^inf xi'(t) / sqrt(t^2 - s^2) dt for a C^1
// profile xi (the constant matches the half-kernel forward above); the
// derivative is taken by central differences on the sample grid.  Throws
// NonSmoothXi when the sampled derivative has a jump.
double abel_inverse(const ZetaProfile& xi, double s);

// int_0^inf zeta(sqrt(r^2 + t^2)) r^k dr; k = 0 recovers the forward
// transform after a change of variables.
double generalized_kernel(const ZetaProfile& zeta, int k, double t);

// Sampled forward transform, for round trips and file output.
ZetaProfile abel_forward_profile(const ZetaProfile& zeta, int nodes = 1024);

}  // namespace hessval
