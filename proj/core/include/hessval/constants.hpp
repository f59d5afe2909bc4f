#pragma once

#include <cmath>
#include <limits>

namespace hessval {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Volume of the unit ball in R^n: kappa_n = pi^{n/2} / Gamma(n/2 + 1).
inline double unit_ball_volume(int n) {
    return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

// Surface measure of the unit sphere S^{n-1}: omega_n = n * kappa_n.
inline double unit_sphere_measure(int n) {
    return n * unit_ball_volume(n);
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

}  // namespace hessval
