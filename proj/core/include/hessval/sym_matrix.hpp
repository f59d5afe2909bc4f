#pragma once

#include "hessval/quadrature.hpp"

namespace hessval {

// k-th elementary symmetric function of the eigenvalues of a symmetric
// matrix, computed as the sum of k x k principal minors (no eigensolver);
// [A]_0 = 1 by convention.
double elementary_symmetric(const Mat& A, int k);

// [A]_k for the spectrum {lam_tangent (multiplicity n-1), lam_radial}:
// the Hessian spectrum of radial functions.
double elementary_symmetric_radial(int n, int k, double lam_tangent, double lam_radial);

}  // namespace hessval
