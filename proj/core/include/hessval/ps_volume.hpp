#pragma once

#include "hessval/convex_function.hpp"

#include <cstdint>

namespace hessval {

// Base region A of the product A x R^n restricting the subgradient graph.
struct BaseRegion {
    enum class Kind { Box, Ball, Sphere, Annulus } kind = Kind::Ball;
    Vec lo, hi;              // Box
    double r0 = 0, r1 = 1;   // Ball: |x| <= r1; Sphere: |x| = r0; Annulus: r0 <= |x| <= r1

    static BaseRegion box(Vec lo_, Vec hi_);
    static BaseRegion ball(double radius);
    static BaseRegion sphere(double radius);
    static BaseRegion annulus(double inner, double outer);

    bool contains(const Vec& x) const;
};

struct PsVolumeEstimate {
    double volume = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
};

// Monte-Carlo volume of P_s(u, A x R^n) = { x + s y : y in the subgradient
// of u at x, x in A } by hit-or-miss sampling with the inverse of the
// expansion map.  Deterministic given (seed, shard) through the splittable
// generator.  Supported: Quadratic, KinkSum, RadialConeV.
PsVolumeEstimate ps_volume(const ConvexFunction& f, const BaseRegion& A, double s,
                           std::size_t samples = 1000000, std::uint64_t seed = 42);

struct ThetaCoefficients {
    std::vector<double> value;      // value[j] multiplies s^j, i.e. Theta_{n-j}
    std::vector<double> std_error;  // propagated MC error per coefficient
    double condition = 0.0;         // condition estimate of the fit matrix
};

// Least-squares fit of the volume polynomial over the s-grid; reproduces
// the polynomial exactly up to MC noise.  Throws DegenerateFit when the
// Vandermonde system of the s-grid is ill-conditioned.
ThetaCoefficients theta_coefficients(const ConvexFunction& f, const BaseRegion& A,
                                     const std::vector<double>& s_grid,
                                     std::size_t samples = 1000000, std::uint64_t seed = 42);

}  // namespace hessval
