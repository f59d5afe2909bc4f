#include "hessval/abel.hpp"

#include <algorithm>
#include <cmath>

namespace hessval {

namespace {

// Breakpoints in the substituted variable u = sqrt(s^2 - t^2) induced by
// the sample nodes of a piecewise-linear profile.
std::vector<double> substituted_breaks(const ZetaProfile& z, double t) {
    std::vector<double> breaks;
    if (z.analytic()) return breaks;
    for (double s : z.abscissae())
        if (s > t) breaks.push_back(std::sqrt(s * s - t * t));
    return breaks;
}

}  // namespace

double abel_forward(const ZetaProfile& zeta, double t) {
    if (t < 0.0) throw Error("abel_forward: t must be >= 0");
    const double S = zeta.support_bound();
    if (t >= S) return 0.0;
    const double U = std::sqrt(S * S - t * t);
    auto f = [&](double u) { return zeta(std::sqrt(u * u + t * t)); };
    return integrate_1d_split(f, 0.0, U, substituted_breaks(zeta, t));
}

double generalized_kernel(const ZetaProfile& zeta, int k, double t) {
    if (k < 0) throw IndexOutOfRange("generalized_kernel: k must be >= 0");
    const double S = zeta.support_bound();
    if (t >= S) return 0.0;
    const double U = std::sqrt(S * S - t * t);
    auto f = [&](double r) { return zeta(std::sqrt(r * r + t * t)) * std::pow(r, k); };
    return integrate_1d_split(f, 0.0, U, substituted_breaks(zeta, t));
}

namespace {

// Central-difference derivative samples of a profile, with a C^1 check.
struct DerivativeProfile {
    std::vector<double> s;
    std::vector<double> d;
    double support;

    double operator()(double x) const {
        if (x >= support) return 0.0;
        if (x <= s.front()) return d.front();
        auto it = std::upper_bound(s.begin(), s.end(), x);
        std::size_t i = static_cast<std::size_t>(it - s.begin()) - 1;
        if (i + 1 >= s.size()) return d.back();
        double f = (x - s[i]) / (s[i + 1] - s[i]);
        return (1.0 - f) * d[i] + f * d[i + 1];
    }
};

DerivativeProfile differentiate(const ZetaProfile& xi) {
    // Resample onto a uniform grid reaching slightly beyond the support, so
    // a kink at the support bound itself is visible to the C^1 check.
    const int m = 2048;
    const double S = xi.support_bound() * 1.02;
    const double h = S / m;
    std::vector<double> s(m + 1), v(m + 1);
    for (int i = 0; i <= m; ++i) {
        s[i] = std::max(i * h, xi.smallest_abscissa());
        v[i] = xi(s[i]);
    }
    std::vector<double> d(m + 1);
    for (int i = 1; i < m; ++i) d[i] = (v[i + 1] - v[i - 1]) / (s[i + 1] - s[i - 1]);
    d[0] = d[1];
    d[m] = d[m - 1];

    // C^1 check: the sampled derivative of a C^1 profile varies by O(h)
    // between neighbours; a kink shows up as an O(1) jump.
    double dmax = 0.0, jump = 0.0;
    for (int i = 0; i <= m; ++i) dmax = std::max(dmax, std::abs(d[i]));
    for (int i = 1; i + 1 <= m; ++i) jump = std::max(jump, std::abs(d[i + 1] - d[i]));
    if (jump > 0.2 * dmax + 1e-9)
        throw NonSmoothXi("abel_inverse: profile is not C^1 on its sample grid");

    return {std::move(s), std::move(d), S};
}

}  // namespace

double abel_inverse(const ZetaProfile& xi, double s) {
    if (s < 0.0) throw Error("abel_inverse: s must be >= 0");
    const double S = xi.support_bound();
    if (s >= S) return 0.0;
    DerivativeProfile dxi = differentiate(xi);
    const double U = std::sqrt(S * S - s * s);
    // t = sqrt(u^2 + s^2), dt = u/t du, kernel 1/sqrt(t^2 - s^2) = 1/u:
    // integrand becomes xi'(t) / t.
    auto f = [&](double u) {
        double t = std::sqrt(u * u + s * s);
        return dxi(t) / t;
    };
    // The inverse of the half-kernel forward transform carries 2/pi: the
    // classical pair uses a doubled forward kernel.
    return -2.0 * integrate_1d(f, 0.0, U) / M_PI;
}

ZetaProfile abel_forward_profile(const ZetaProfile& zeta, int nodes) {
    const double S = zeta.support_bound();
    std::vector<double> s(nodes), v(nodes);
    for (int i = 0; i < nodes; ++i) {
        s[i] = S * (i + 1) / nodes;
        v[i] = abel_forward(zeta, s[i]);
    }
    return ZetaProfile::from_samples(std::move(s), std::move(v), S);
}

}  // namespace hessval
