#pragma once

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace hessval {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct QuadratureTol {
    double abs = 1e-10;
    double rel = 1e-8;
};

// Adaptive Gauss-Kronrod on [a, b].  Integrand must be finite on the open
// interval; endpoint kinks are fine.
inline double integrate_1d(const std::function<double(double)>& f, double a, double b,
                           QuadratureTol tol = {}) {
    if (!(b > a)) return 0.0;
    double error = 0.0;
    double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 12, tol.rel, &error);
    (void)tol.abs;
    return v;
}

// Same, but splits at the provided interior breakpoints first.  Used when
// the integrand is only piecewise smooth and the kink locations are known.
inline double integrate_1d_split(const std::function<double(double)>& f, double a, double b,
                                 const std::vector<double>& breaks, QuadratureTol tol = {}) {
    std::vector<double> pts;
    pts.push_back(a);
    for (double s : breaks)
        if (s > a && s < b) pts.push_back(s);
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        total += integrate_1d(f, pts[i], pts[i + 1], tol);
    return total;
}

// Gauss-Legendre nodes and weights on [0, 1], order 15 per panel.
inline void unit_gauss_nodes(std::vector<double>& nodes, std::vector<double>& weights) {
    constexpr int kOrder = 15;
    const auto& absc = boost::math::quadrature::gauss<double, kOrder>::abscissa();
    const auto& wts = boost::math::quadrature::gauss<double, kOrder>::weights();
    nodes.clear();
    weights.clear();
    for (std::size_t i = 0; i < absc.size(); ++i) {
        nodes.push_back(0.5 * (1.0 + absc[i]));
        weights.push_back(0.5 * wts[i]);
        if (absc[i] != 0.0) {
            nodes.push_back(0.5 * (1.0 - absc[i]));
            weights.push_back(0.5 * wts[i]);
        }
    }
}

// Composite tensor-product Gauss-Legendre quadrature over a box.
inline double box_quadrature(const std::function<double(const Vec&)>& f, const Vec& lo,
                             const Vec& hi, int panels_per_axis = 4) {
    const int n = static_cast<int>(lo.size());
    std::vector<double> nodes, weights;
    unit_gauss_nodes(nodes, weights);
    const int m = static_cast<int>(nodes.size());
    const int per_axis = panels_per_axis * m;

    std::vector<std::vector<double>> xs(n), ws(n);
    for (int a = 0; a < n; ++a) {
        double len = (hi[a] - lo[a]) / panels_per_axis;
        for (int p = 0; p < panels_per_axis; ++p)
            for (int i = 0; i < m; ++i) {
                xs[a].push_back(lo[a] + (p + nodes[i]) * len);
                ws[a].push_back(weights[i] * len);
            }
    }

    double total = 0.0;
    std::vector<int> idx(n, 0);
    Vec x(n);
    while (true) {
        double w = 1.0;
        for (int a = 0; a < n; ++a) {
            x[a] = xs[a][idx[a]];
            w *= ws[a][idx[a]];
        }
        total += w * f(x);
        int a = n - 1;
        for (; a >= 0; --a) {
            if (++idx[a] < per_axis) break;
            idx[a] = 0;
        }
        if (a < 0) break;
    }
    return total;
}

// Quadrature rule over the unit sphere S^{n-1} for n in {1, 2, 3}:
// (unit direction, weight) pairs with weights summing to omega_n.
// n=2 uses the trapezoidal rule in the angle (spectrally accurate for
// smooth periodic integrands); n=3 crosses Gauss-Legendre in cos(theta)
// with a trapezoidal azimuth rule.
inline std::vector<std::pair<Vec, double>> sphere_rule(int n, int resolution = 128) {
    std::vector<std::pair<Vec, double>> rule;
    if (n == 1) {
        Vec p(1), m(1);
        p << 1.0;
        m << -1.0;
        rule.emplace_back(p, 1.0);
        rule.emplace_back(m, 1.0);
    } else if (n == 2) {
        int m = std::max(8, resolution);
        double w = 2.0 * M_PI / m;
        for (int k = 0; k < m; ++k) {
            double a = w * k;
            Vec d(2);
            d << std::cos(a), std::sin(a);
            rule.emplace_back(d, w);
        }
    } else if (n == 3) {
        constexpr int kOrder = 30;
        const auto& absc = boost::math::quadrature::gauss<double, kOrder>::abscissa();
        const auto& wts = boost::math::quadrature::gauss<double, kOrder>::weights();
        // composite Gauss panels in cos(theta)
        const int panels = std::max(1, resolution / 96);
        std::vector<std::pair<double, double>> ct;  // (cos theta, weight)
        for (int p = 0; p < panels; ++p) {
            double a = -1.0 + 2.0 * p / panels, b = -1.0 + 2.0 * (p + 1) / panels;
            double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (std::size_t i = 0; i < absc.size(); ++i) {
                ct.emplace_back(mid + half * absc[i], half * wts[i]);
                if (absc[i] != 0.0) ct.emplace_back(mid - half * absc[i], half * wts[i]);
            }
        }
        int np = std::max(16, resolution);
        double wp = 2.0 * M_PI / np;
        for (auto [c, w] : ct) {
            double s = std::sqrt(std::max(0.0, 1.0 - c * c));
            for (int k = 0; k < np; ++k) {
                double a = wp * k;
                Vec d(3);
                d << s * std::cos(a), s * std::sin(a), c;
                rule.emplace_back(d, w * wp);
            }
        }
    }
    return rule;
}

}  // namespace hessval
