#include "hessval/transforms.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace hessval;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

GridData sample_quadratic_grid(double c, int nodes, double R, int dim = 2) {
    GridData g = GridData::make(Vec::Constant(dim, -R), Vec::Constant(dim, R),
                                std::vector<int>(dim, nodes));
    g.for_each([&](const std::vector<int>& idx, std::size_t k) {
        g.values[k] = 0.5 * c * g.node(idx).squaredNorm();
    });
    return g;
}

}  // namespace

TEST_CASE("legendre transform") {
    SUBCASE("half the squared norm is self-dual") {
        ConvexFunction f = ConvexFunction::grid(sample_quadratic_grid(1.0, 201, 2.0));
        ConvexFunction conj = legendre(f);
        for (double r : {0.0, 0.5, 1.2, 1.8})
            CHECK(conj.evaluate(v2(r, 0.0)) == doctest::Approx(0.5 * r * r).epsilon(1e-3));
    }

    SUBCASE("cone functions are conjugate to each other") {
        for (double t : {0.5, 1.0}) {
            ConvexFunction ut = ConvexFunction::radial_cone_u(2, t);
            ConvexFunction conj = legendre(ut);
            ConvexFunction vt = ConvexFunction::radial_cone_v(2, t);
            // the sampled conjugate is exact at its own grid nodes
            const GridData& g = conj.grid_data();
            double worst = 0.0;
            g.for_each([&](const std::vector<int>& idx, std::size_t k) {
                worst = std::max(worst, std::abs(g.values[k] - vt.evaluate(g.node(idx))));
            });
            CHECK(worst <= 1e-12);
        }
    }

    SUBCASE("ball indicator conjugates to the norm, brute-force oracle") {
        ConvexFunction ball = ConvexFunction::radial_cone_u(2, 0.0);
        Vec lo = Vec::Constant(2, -2.0), hi = Vec::Constant(2, 2.0);
        ConvexFunction conj = legendre(ball, lo, hi, {161, 161});
        // oracle: sup over a fine grid of the ball
        for (Vec y : {v2(1.0, 0.5), v2(-1.3, 0.2), v2(0.0, 1.9)}) {
            double brute = -kInf;
            const int m = 401;
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j) {
                    Vec x = v2(-1.0 + 2.0 * i / (m - 1), -1.0 + 2.0 * j / (m - 1));
                    if (x.norm() <= 1.0) brute = std::max(brute, y.dot(x));
                }
            CHECK(conj.evaluate(y) == doctest::Approx(brute).epsilon(1e-2));
            CHECK(conj.evaluate(y) == doctest::Approx(y.norm()).epsilon(1e-2));
        }
    }

    SUBCASE("empty domain is rejected") {
        GridData g = GridData::make(Vec::Constant(1, -1.0), Vec::Constant(1, 1.0), {9});
        ConvexFunction f = ConvexFunction::grid(std::move(g));  // all infinite
        CHECK_THROWS_AS(legendre(f), EmptyDomain);
    }

    SUBCASE("conjugate of the epi-sum is the sum of conjugates") {
        ConvexFunction u = ConvexFunction::grid(sample_quadratic_grid(1.0, 65, 3.0));
        ConvexFunction v = ConvexFunction::grid(sample_quadratic_grid(2.0, 65, 3.0));
        ConvexFunction sum_conj = legendre(inf_convolve(u, v));
        ConvexFunction cu = legendre(u);
        ConvexFunction cv = legendre(v);
        for (double r : {0.0, 0.4, 1.0}) {
            Vec y = v2(r, -r);
            double lhs = sum_conj.evaluate(y);
            double rhs = cu.evaluate(y) + cv.evaluate(y);
            CHECK(lhs == doctest::Approx(rhs).epsilon(5e-2));
        }
    }
}

TEST_CASE("asymmetric grid shapes keep the per-axis strides straight") {
    GridData g = GridData::make((Vec(2) << -2.0, -1.0).finished(),
                                (Vec(2) << 2.0, 1.0).finished(), {65, 33});
    g.for_each([&](const std::vector<int>& idx, std::size_t k) {
        Vec x = g.node(idx);
        g.values[k] = 0.5 * x[0] * x[0] + x[1] * x[1];  // anisotropic
    });
    ConvexFunction f = ConvexFunction::grid(std::move(g));

    // conjugate of a/2 x^2 + b y^2 is y1^2/(2a) + y2^2/(4b)
    ConvexFunction conj = legendre(f);
    Vec y(2);
    for (double r : {0.0, 0.4, 0.8}) {
        y << r, -r;
        double expect = 0.5 * r * r + r * r / 4.0;
        CHECK(conj.evaluate(y) == doctest::Approx(expect).epsilon(3e-2));
    }

    ConvexFunction m = moreau_yosida(f, 0.5);
    Vec x(2);
    for (double r : {0.0, 0.5}) {
        x << r, r;
        // per-axis closed forms: c -> c/(1 + lambda c)
        double expect = 0.5 * (1.0 / 1.5) * r * r + 0.5 * (2.0 / 2.0) * r * r;
        CHECK(m.evaluate(x) == doctest::Approx(expect).epsilon(5e-3));
    }
}

TEST_CASE("three-dimensional grid transforms") {
    GridData g = GridData::make(Vec::Constant(3, -1.5), Vec::Constant(3, 1.5), {33, 33, 33});
    g.for_each([&](const std::vector<int>& idx, std::size_t k) {
        g.values[k] = 0.5 * g.node(idx).squaredNorm();
    });
    ConvexFunction f = ConvexFunction::grid(std::move(g));

    SUBCASE("self-dual up to discretization") {
        ConvexFunction conj = legendre(f);
        Vec y(3);
        for (double r : {0.0, 0.5, 1.0}) {
            y << r, -r / 2, r / 3;
            CHECK(conj.evaluate(y) == doctest::Approx(0.5 * y.squaredNorm()).epsilon(2e-2));
        }
    }

    SUBCASE("separable envelope matches the closed form") {
        ConvexFunction m = moreau_yosida(f, 1.0);
        Vec x(3);
        for (double r : {0.0, 0.6, 1.2}) {
            x << r, r / 2, -r / 2;
            CHECK(m.evaluate(x) == doctest::Approx(0.25 * x.squaredNorm()).epsilon(5e-3));
        }
    }
}

TEST_CASE("biconjugate gap") {
    SUBCASE("strictly convex samples reproduce themselves") {
        ConvexFunction f1 = ConvexFunction::grid(sample_quadratic_grid(1.0, 201, 2.0, 1));
        CHECK(biconjugate_check(f1) <= 1e-6);
        ConvexFunction f2 = ConvexFunction::grid(sample_quadratic_grid(1.0, 101, 2.0, 2));
        CHECK(biconjugate_check(f2) <= 1e-6);
    }

    SUBCASE("general convex grids stay within O(h)") {
        // a kinked but convex profile
        GridData g = GridData::make(Vec::Constant(1, -2.0), Vec::Constant(1, 2.0), {201});
        g.for_each([&](const std::vector<int>& idx, std::size_t k) {
            double x = g.node(idx)[0];
            g.values[k] = std::max(std::abs(x) - 0.5, 0.0) + 0.1 * x * x;
        });
        double h = g.spacing(0);
        CHECK(biconjugate_check(ConvexFunction::grid(std::move(g))) <= 5 * h);
    }

    SUBCASE("planted non-convex array: gap equals the envelope distance") {
        GridData g = GridData::make(Vec::Constant(1, -1.0), Vec::Constant(1, 1.0), {41});
        g.for_each([&](const std::vector<int>& idx, std::size_t k) {
            double x = g.node(idx)[0];
            g.values[k] = x * x + (std::abs(x) < 0.2 ? 0.3 : 0.0);  // bump near 0
        });
        // independent oracle: lower convex hull of the sample points
        std::vector<double> xs, vs;
        GridData gc = g;
        gc.for_each([&](const std::vector<int>& idx, std::size_t k) {
            xs.push_back(gc.node(idx)[0]);
            vs.push_back(gc.values[k]);
        });
        std::vector<int> hull;
        auto convex_turn = [&](int a, int b, int c) {
            return (vs[b] - vs[a]) * (xs[c] - xs[b]) < (vs[c] - vs[b]) * (xs[b] - xs[a]);
        };
        for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
            while (hull.size() >= 2 && !convex_turn(hull[hull.size() - 2], hull.back(), i))
                hull.pop_back();
            hull.push_back(i);
        }
        double oracle_gap = 0.0;
        for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
            for (int k = hull[i]; k <= hull[i + 1]; ++k) {
                double f = (xs[k] - xs[hull[i]]) / (xs[hull[i + 1]] - xs[hull[i]]);
                double env = (1 - f) * vs[hull[i]] + f * vs[hull[i + 1]];
                oracle_gap = std::max(oracle_gap, vs[k] - env);
            }
        }
        double gap = biconjugate_check(ConvexFunction::grid(std::move(g)));
        CHECK(gap > 0.0);
        CHECK(gap == doctest::Approx(oracle_gap).epsilon(1e-3));
    }
}

TEST_CASE("moreau envelope") {
    SUBCASE("quadratic closed form against the grid epi-sum oracle") {
        // M_1(|x|^2/2) = |x|^2/4: compare the grid route with the closed form
        ConvexFunction fg = ConvexFunction::grid(sample_quadratic_grid(1.0, 129, 3.0));
        ConvexFunction mg = moreau_yosida(fg, 1.0);
        for (double r : {0.0, 0.5, 1.0, 2.0})
            CHECK(mg.evaluate(v2(r, 0.0)) == doctest::Approx(r * r / 4.0).epsilon(2e-3));

        ConvexFunction fq = ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0);
        ConvexFunction mq = moreau_yosida(fq, 1.0);
        CHECK(mq.quadratic_data().Q(0, 0) == doctest::Approx(0.5));
        for (double r : {0.4, 1.3})
            CHECK(mq.evaluate(v2(r, 0.0)) == doctest::Approx(r * r / 4.0).epsilon(1e-12));
    }

    SUBCASE("indicator of the origin smooths to the parabola") {
        ConvexFunction id =
            ConvexFunction::indicator_linear(Polytope::point(Vec::Zero(2)), Vec::Zero(2));
        ConvexFunction m = moreau_yosida(id, 1.0);
        for (double r : {0.3, 1.0, 2.5})
            CHECK(m.evaluate(v2(r, 0.0)) == doctest::Approx(0.5 * r * r).epsilon(1e-12));
    }

    SUBCASE("conjugate of the envelope adds the quadratic") {
        // (M_lambda u)^* = u^* + lambda |y|^2 / 2 on the dual grid
        double lambda = 0.7;
        ConvexFunction u = ConvexFunction::grid(sample_quadratic_grid(2.0, 129, 2.0));
        ConvexFunction mu = moreau_yosida(u, lambda);
        ConvexFunction conj_m = legendre(mu);
        ConvexFunction conj_u = legendre(u);
        for (double r : {0.0, 0.4, 1.1}) {
            Vec y = v2(r, r / 2);
            double rhs = conj_u.evaluate(y) + 0.5 * lambda * y.squaredNorm();
            CHECK(conj_m.evaluate(y) == doctest::Approx(rhs).epsilon(5e-3));
        }
    }

    SUBCASE("envelope increases to the function as lambda decreases") {
        ConvexFunction u = ConvexFunction::quadratic(Mat(2.0 * Mat::Identity(2, 2)),
                                                     Vec::Zero(2), 0.0);
        double prev = kInf;
        for (double lambda : {1.0, 0.5, 0.1, 0.01}) {
            ConvexFunction m = moreau_yosida(u, lambda);
            double gap = 0.0;
            for (double r : {0.2, 0.8, 1.5})
                gap = std::max(gap, u.evaluate(v2(r, 0.0)) - m.evaluate(v2(r, 0.0)));
            CHECK(gap >= 0.0);
            CHECK(gap <= prev + 1e-12);
            prev = gap;
        }
    }

    SUBCASE("cone envelopes are differentiable radial profiles") {
        ConvexFunction ut = ConvexFunction::radial_cone_u(2, 1.0);
        ConvexFunction m = moreau_yosida(ut, 0.5);
        REQUIRE(m.variant() == Variant::RadialProfile);
        // value: r^2/(2 lambda) below lambda t, then linear, then quadratic again
        CHECK(m.evaluate(v2(0.25, 0.0)) == doctest::Approx(0.25 * 0.25).epsilon(1e-12));
        // middle law: t (r - lambda t) + lambda t^2 / 2 at r = 1
        CHECK(m.evaluate(v2(1.0, 0.0)) == doctest::Approx(0.75).epsilon(1e-9));
        // C^1: gradient exists across the law changes
        for (double r : {0.5, 1.5, 2.0}) CHECK_NOTHROW(m.gradient(v2(r, 0.0)));
    }

    SUBCASE("nonpositive lambda is rejected") {
        ConvexFunction u = ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0);
        CHECK_THROWS_AS(moreau_yosida(u, 0.0), NonpositiveScale);
    }
}

TEST_CASE("rotational epi-symmetrization") {
    SUBCASE("radial inputs are fixed points") {
        // |x|^2/2 restricted to the 2-ball
        GridData g = GridData::make(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), {81, 81});
        g.for_each([&](const std::vector<int>& idx, std::size_t k) {
            Vec x = g.node(idx);
            g.values[k] = x.norm() <= 1.0 ? 0.5 * x.squaredNorm() : kInf;
        });
        ConvexFunction u = ConvexFunction::grid(std::move(g));
        ConvexFunction star = rotational_episymmetrize(u, 32);
        for (double r : {0.0, 0.3, 0.6})
            CHECK(star.evaluate(v2(r, 0.0)) == doctest::Approx(0.5 * r * r).epsilon(5e-2));
    }

    SUBCASE("symmetrized square indicator is radial") {
        ConvexFunction square = ConvexFunction::indicator_linear(
            Polytope::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)), Vec::Zero(2));
        ConvexFunction star = rotational_episymmetrize(square, 64);
        // boundary radius of the domain should be direction independent
        auto domain_radius = [&](double angle) {
            double lo = 0.0, hi = 2.5;
            for (int it = 0; it < 60; ++it) {
                double mid = 0.5 * (lo + hi);
                Vec x = v2(mid * std::cos(angle), mid * std::sin(angle));
                (std::isfinite(star.evaluate(x)) ? lo : hi) = mid;
            }
            return lo;
        };
        double rmin = kInf, rmax = 0.0;
        for (int k = 0; k < 16; ++k) {
            double r = domain_radius(2.0 * M_PI * k / 16.0);
            rmin = std::min(rmin, r);
            rmax = std::max(rmax, r);
        }
        CHECK(rmax - rmin <= 0.1);
        // the mean body of rotated squares has radius near 4/pi
        CHECK(0.5 * (rmin + rmax) == doctest::Approx(4.0 / M_PI).epsilon(0.05));
    }

    SUBCASE("refinement in the rotation count is Cauchy") {
        // direct support-function average of the square at dense angles
        auto h_square = [](double angle) {
            return std::abs(std::cos(angle)) + std::abs(std::sin(angle));
        };
        auto avg = [&](int m, double angle) {
            double acc = 0.0;
            for (int k = 0; k < m; ++k) acc += h_square(angle - 2.0 * M_PI * k / m);
            return acc / m;
        };
        auto gap = [&](int m1, int m2) {
            double worst = 0.0;
            for (int k = 0; k < 360; ++k) {
                double a = 2.0 * M_PI * k / 360.0;
                worst = std::max(worst, std::abs(avg(m1, a) - avg(m2, a)));
            }
            return worst;
        };
        CHECK(gap(64, 256) <= gap(16, 64) + 1e-15);
    }

    SUBCASE("output-level refinement is Cauchy on an inner disc") {
        ConvexFunction square = ConvexFunction::indicator_linear(
            Polytope::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0)), Vec::Zero(2));
        auto out16 = rotational_episymmetrize(square, 16);
        auto out64 = rotational_episymmetrize(square, 64);
        auto out256 = rotational_episymmetrize(square, 256);
        auto gap = [&](const ConvexFunction& a, const ConvexFunction& b) {
            double worst = 0.0;
            for (int k = 0; k < 64; ++k) {
                double ang = 2.0 * M_PI * k / 64.0;
                for (double r : {0.2, 0.6, 0.95}) {
                    Vec x = v2(r * std::cos(ang), r * std::sin(ang));
                    double va = a.evaluate(x), vb = b.evaluate(x);
                    if (std::isfinite(va) && std::isfinite(vb))
                        worst = std::max(worst, std::abs(va - vb));
                }
            }
            return worst;
        };
        CHECK(gap(out64, out256) <= gap(out16, out64) + 1e-12);
    }

    SUBCASE("unbounded domains are rejected") {
        ConvexFunction u = ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0);
        CHECK_THROWS_AS(rotational_episymmetrize(u, 16), UnboundedDomain);
    }
}
