#include "hessval/convex_function.hpp"
#include "hessval/rng.hpp"
#include "hessval/transforms.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace hessval;

namespace {

Vec v2(double x, double y) {
    Vec v(2);
    v << x, y;
    return v;
}

GridData half_norm_squared_grid(int nodes = 201, double R = 2.0) {
    GridData g = GridData::make(Vec::Constant(2, -R), Vec::Constant(2, R), {nodes, nodes});
    g.for_each([&](const std::vector<int>& idx, std::size_t k) {
        g.values[k] = 0.5 * g.node(idx).squaredNorm();
    });
    return g;
}

}  // namespace

TEST_CASE("evaluation of the cone family") {
    ConvexFunction u1 = ConvexFunction::radial_cone_u(2, 1.0);
    CHECK(u1.evaluate(v2(0.5, 0.0)) == doctest::Approx(0.5));
    CHECK(u1.evaluate(v2(2.0, 0.0)) == kInf);
    // t|x| holds exactly throughout the ball
    for (double r : {0.1, 0.33, 0.77, 0.99})
        CHECK(u1.evaluate(v2(r, 0.0)) == doctest::Approx(r).epsilon(1e-15));

    ConvexFunction v1 = ConvexFunction::radial_cone_v(2, 1.0);
    CHECK(v1.evaluate(v2(3.0, 0.0)) == doctest::Approx(2.0));
    CHECK(v1.evaluate(v2(0.5, 0.0)) == 0.0);

    CHECK_THROWS_AS(u1.evaluate(Vec::Zero(3)), DimensionMismatch);
}

TEST_CASE("gradients and Hessians") {
    SUBCASE("quadratic") {
        ConvexFunction q = ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0);
        Vec g = q.gradient(v2(1.0, 2.0));
        CHECK(g[0] == doctest::Approx(1.0));
        CHECK(g[1] == doctest::Approx(2.0));
        CHECK((q.hessian(v2(1.0, 2.0)) - Mat::Identity(2, 2)).norm() == doctest::Approx(0.0));
    }

    SUBCASE("cone gradient and curvature eigenvalues") {
        ConvexFunction v1 = ConvexFunction::radial_cone_v(2, 1.0);
        Vec g = v1.gradient(v2(2.0, 0.0));
        CHECK(g[0] == doctest::Approx(1.0));
        CHECK(g[1] == doctest::Approx(0.0));
        Eigen::SelfAdjointEigenSolver<Mat> es(v1.hessian(v2(2.0, 0.0)));
        CHECK(es.eigenvalues()[0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(es.eigenvalues()[1] == doctest::Approx(0.5));
        CHECK_THROWS_AS(v1.gradient(v2(1.0, 0.0)), NotDifferentiable);
    }

    SUBCASE("grid differences against the analytic gradient") {
        ConvexFunction f = ConvexFunction::grid(half_norm_squared_grid());
        Vec g = f.gradient(v2(0.5, 0.5));
        CHECK(std::abs(g[0] - 0.5) <= 1e-3);
        CHECK(std::abs(g[1] - 0.5) <= 1e-3);
        Mat H = f.hessian(v2(0.5, 0.5));
        CHECK(std::abs(H(0, 0) - 1.0) <= 1e-3);
        CHECK(std::abs(H(0, 1)) <= 1e-3);
    }

    SUBCASE("grid refuses stencils that touch infinite cells") {
        GridData g = half_norm_squared_grid(21);
        std::vector<int> idx{10, 12};
        g.at(idx) = kInf;
        ConvexFunction f = ConvexFunction::grid(std::move(g));
        CHECK_THROWS_AS(f.gradient(v2(0.0, 0.4)), NotDifferentiable);   // at the hole
        CHECK_THROWS_AS(f.gradient(v2(0.2, 0.4)), NotDifferentiable);   // stencil touches it
        CHECK_THROWS_AS(f.hessian(v2(0.2, 0.6)), NotDifferentiable);    // mixed stencil corner
        CHECK_THROWS_AS(f.gradient(v2(-2.0, 0.0)), NotDifferentiable);  // boundary node
    }

    SUBCASE("kink family") {
        ConvexFunction k = ConvexFunction::kink_sum(2, v2(0.5, -0.5), {0, 1});
        CHECK(k.evaluate(v2(1.5, -0.5)) == doctest::Approx(0.5));
        Vec g = k.gradient(v2(1.0, 0.0));
        CHECK(g[0] == doctest::Approx(0.5));
        CHECK(g[1] == doctest::Approx(0.5));
        CHECK_THROWS_AS(k.gradient(v2(0.5, 0.3)), NotDifferentiable);
    }
}

TEST_CASE("infimal convolution") {
    SUBCASE("quadratic pair has the harmonic-sum curvature") {
        // inf-conv of c1|x|^2/2 and c2|x|^2/2 is (c1 c2/(c1+c2)) |x|^2/2
        ConvexFunction u = ConvexFunction::grid(half_norm_squared_grid(65, 3.0));
        ConvexFunction w = inf_convolve(u, u);
        for (double r : {0.0, 0.5, 1.0, 1.9}) {
            double expect = 0.25 * r * r;
            CHECK(w.evaluate(v2(r, 0.0)) == doctest::Approx(expect).epsilon(5e-3));
            CHECK(w.evaluate(v2(r / std::sqrt(2.0), r / std::sqrt(2.0))) ==
                  doctest::Approx(expect).epsilon(5e-3));
        }
    }

    SUBCASE("indicator of the origin is the identity element") {
        ConvexFunction u = ConvexFunction::grid(half_norm_squared_grid(65, 2.0));
        ConvexFunction id = ConvexFunction::indicator_linear(Polytope::point(Vec::Zero(2)),
                                                             Vec::Zero(2));
        ConvexFunction w = inf_convolve(u, id);
        // probe at output grid nodes, where the epi-sum is exact
        for (double r : {0.0, 0.5, 1.5})
            CHECK(w.evaluate(v2(r, 0.0)) == doctest::Approx(0.5 * r * r).epsilon(1e-9));
    }

    SUBCASE("ball indicators add their radii") {
        ConvexFunction ball = ConvexFunction::radial_cone_u(2, 0.0);  // indicator of B^2
        ConvexFunction w = inf_convolve(ball, ball);
        CHECK(w.evaluate(v2(1.8, 0.0)) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(w.evaluate(v2(0.0, 1.2)) == doctest::Approx(0.0).epsilon(1e-9));
        CHECK(w.evaluate(v2(2.2, 0.0)) == kInf);
    }

    SUBCASE("empty effective domains are rejected") {
        GridData g = GridData::make(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0), {9, 9});
        ConvexFunction all_inf = ConvexFunction::grid(std::move(g));
        ConvexFunction u = ConvexFunction::grid(half_norm_squared_grid(17));
        CHECK_THROWS_AS(inf_convolve(u, all_inf), EmptyDomain);
    }

    SUBCASE("commutative and associative on grid triples") {
        auto mk = [](double c, double shift) {
            GridData g = GridData::make(Vec::Constant(2, -1.5), Vec::Constant(2, 1.5), {33, 33});
            g.for_each([&](const std::vector<int>& idx, std::size_t k) {
                Vec x = g.node(idx);
                g.values[k] = 0.5 * c * (x - Vec::Constant(2, shift)).squaredNorm();
            });
            return ConvexFunction::grid(std::move(g));
        };
        ConvexFunction a = mk(1.0, 0.0), b = mk(2.0, 0.2), c = mk(0.5, -0.1);
        ConvexFunction ab = inf_convolve(a, b), ba = inf_convolve(b, a);
        const GridData &gab = ab.grid_data(), &gba = ba.grid_data();
        for (std::size_t k = 0; k < gab.values.size(); ++k)
            if (std::isfinite(gab.values[k]) || std::isfinite(gba.values[k]))
                CHECK(gab.values[k] == doctest::Approx(gba.values[k]).epsilon(1e-12));

        ConvexFunction abc1 = inf_convolve(ab, c);
        ConvexFunction abc2 = inf_convolve(a, inf_convolve(b, c));
        for (double r : {0.0, 0.4, 1.0})
            CHECK(abc1.evaluate(v2(r, -r)) ==
                  doctest::Approx(abc2.evaluate(v2(r, -r))).epsilon(1e-6));
    }
}

TEST_CASE("epi-multiplication") {
    ConvexFunction u = ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0);

    SUBCASE("unit scale is the identity") {
        ConvexFunction w = epi_multiply(u, 1.0);
        for (double r : {0.3, 1.1})
            CHECK(w.evaluate(v2(r, 0.0)) == doctest::Approx(u.evaluate(v2(r, 0.0))));
    }

    SUBCASE("quadratic rescale") {
        // lambda o (|x|^2/2) = |x|^2 / (2 lambda)
        ConvexFunction w = epi_multiply(u, 2.0);
        for (double r : {0.5, 1.0, 2.0})
            CHECK(w.evaluate(v2(r, 0.0)) == doctest::Approx(r * r / 4.0).epsilon(1e-12));
    }

    SUBCASE("round trip by the reciprocal") {
        GridData g = half_norm_squared_grid(41);
        ConvexFunction f = ConvexFunction::grid(std::move(g));
        ConvexFunction back = epi_multiply(epi_multiply(f, 3.0), 1.0 / 3.0);
        const GridData& gb = back.grid_data();
        const GridData& gf = f.grid_data();
        for (std::size_t k = 0; k < gf.values.size(); ++k)
            CHECK(gb.values[k] == doctest::Approx(gf.values[k]).epsilon(1e-12));
    }

    SUBCASE("cone family maps within itself") {
        ConvexFunction ut = ConvexFunction::radial_cone_u(2, 0.7);
        ConvexFunction w = epi_multiply(ut, 2.5);
        CHECK(w.cone_data().t == doctest::Approx(0.7));
        CHECK(w.cone_data().ball_radius == doctest::Approx(2.5));
        ConvexFunction vt = ConvexFunction::radial_cone_v(2, 0.7);
        ConvexFunction wv = epi_multiply(vt, 2.0);
        CHECK(wv.cone_data().t == doctest::Approx(1.4));
        for (double r : {0.5, 1.6, 2.4})
            CHECK(wv.evaluate(v2(r, 0.0)) ==
                  doctest::Approx(2.0 * vt.evaluate(v2(r / 2.0, 0.0))).epsilon(1e-12));
    }

    SUBCASE("conjugacy: the conjugate of the epi-multiple is the multiple") {
        // (lambda o u)^* = lambda u^*, checked through the discrete transform
        ConvexFunction f = ConvexFunction::grid(half_norm_squared_grid(101));
        double lambda = 2.0;
        ConvexFunction lhs = legendre(epi_multiply(f, lambda));
        ConvexFunction rhs = legendre(f);
        for (double r : {0.0, 0.5, 1.2}) {
            Vec y = v2(r, -r / 2);
            CHECK(lhs.evaluate(y) ==
                  doctest::Approx(lambda * rhs.evaluate(y)).epsilon(5e-3));
        }
    }

    SUBCASE("nonpositive scale is rejected") {
        CHECK_THROWS_AS(epi_multiply(u, 0.0), NonpositiveScale);
        CHECK_THROWS_AS(epi_multiply(u, -1.0), NonpositiveScale);
    }
}

TEST_CASE("pointwise lattice operations") {
    SUBCASE("max and min of a function with itself") {
        std::vector<PwaPiece> ps;
        Vec s(1);
        s << 0.5;
        ps.push_back({s, 0.0, Polytope::interval(-1.0, 1.0)});
        ConvexFunction u = ConvexFunction::piecewise_affine(1, ps);
        ConvexFunction mx = pointwise_max(u, u);
        ConvexFunction mn = pointwise_min(u, u);
        for (double x : {-0.9, 0.0, 0.8}) {
            Vec p(1);
            p << x;
            CHECK(mx.evaluate(p) == doctest::Approx(u.evaluate(p)));
            CHECK(mn.evaluate(p) == doctest::Approx(u.evaluate(p)));
        }
    }

    SUBCASE("W-shaped minimum is rejected") {
        auto abs_shifted = [](double center) {
            Vec sl(1), sr(1);
            sl << -1.0;
            sr << 1.0;
            std::vector<PwaPiece> ps;
            ps.push_back({sl, center, Polytope::interval(-4.0, center)});
            ps.push_back({sr, -center, Polytope::interval(center, 4.0)});
            return ConvexFunction::piecewise_affine(1, ps);
        };
        ConvexFunction u = abs_shifted(1.0);   // |x - 1|
        ConvexFunction v = abs_shifted(-1.0);  // |x + 1|
        CHECK_THROWS_AS(pointwise_min(u, v), NonConvexMin);
    }

    SUBCASE("hinge pair: max is the absolute value, min vanishes") {
        Vec zero(1), plus(1), minus(1);
        zero << 0.0;
        plus << 1.0;
        minus << -1.0;
        std::vector<PwaPiece> pu, pv;
        pu.push_back({zero, 0.0, Polytope::interval(-5.0, 0.0)});
        pu.push_back({plus, 0.0, Polytope::interval(0.0, 5.0)});
        pv.push_back({minus, 0.0, Polytope::interval(-5.0, 0.0)});
        pv.push_back({zero, 0.0, Polytope::interval(0.0, 5.0)});
        ConvexFunction u = ConvexFunction::piecewise_affine(1, pu);  // max(0, x)
        ConvexFunction v = ConvexFunction::piecewise_affine(1, pv);  // max(0, -x)
        ConvexFunction mx = pointwise_max(u, v);
        ConvexFunction mn = pointwise_min(u, v);
        // dense-sampling oracle
        for (int k = 0; k <= 100; ++k) {
            Vec x(1);
            x << -4.9 + 9.8 * k / 100.0;
            CHECK(mx.evaluate(x) == doctest::Approx(std::abs(x[0])).epsilon(1e-12));
            CHECK(mn.evaluate(x) == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("2-D piecewise-affine max refines the dissection") {
    // two single-piece affine functions on overlapping squares
    Vec a1(2), a2(2);
    a1 << 1.0, 0.0;
    a2 << 0.0, 1.0;
    std::vector<PwaPiece> pu, pv;
    pu.push_back({a1, 0.0, Polytope::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0))});
    pv.push_back({a2, 0.0, Polytope::box(Vec::Constant(2, -1.0), Vec::Constant(2, 1.0))});
    ConvexFunction u = ConvexFunction::piecewise_affine(2, pu);
    ConvexFunction v = ConvexFunction::piecewise_affine(2, pv);
    ConvexFunction mx = pointwise_max(u, v);
    REQUIRE(mx.variant() == Variant::PiecewiseAffine);
    CHECK(mx.pwa_pieces().size() == 2);  // split along the diagonal
    CHECK(is_convex(mx));
    SplitRng rng(17, 0);
    for (int k = 0; k < 200; ++k) {
        Vec x(2);
        x << rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0);
        CHECK(mx.evaluate(x) == doctest::Approx(std::max(x[0], x[1])).epsilon(1e-12));
    }
    // area is preserved by the refinement
    double area = 0.0;
    for (const PwaPiece& p : mx.pwa_pieces()) area += p.region.volume();
    CHECK(area == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("convexity checks") {
    SUBCASE("constructor outputs pass") {
        CHECK(is_convex(ConvexFunction::grid(half_norm_squared_grid(41))));
        CHECK(is_convex(ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0)));
        CHECK(is_convex(ConvexFunction::radial_cone_v(2, 0.5)));
        CHECK(is_convex(ConvexFunction::kink_sum(2, v2(0.1, 0.2), {0, 1})));
    }

    SUBCASE("planted non-convex array fails") {
        GridData g = half_norm_squared_grid(41);
        std::vector<int> idx{20, 20};
        g.at(idx) += 0.5;  // a bump in the middle
        CHECK_FALSE(is_convex(ConvexFunction::grid(std::move(g))));
    }

    SUBCASE("grids with a non-convex domain fail") {
        GridData g = half_norm_squared_grid(41);
        std::vector<int> idx{20, 20};
        g.at(idx) = kInf;  // a hole in the domain
        CHECK_FALSE(is_convex(ConvexFunction::grid(std::move(g))));
    }

    SUBCASE("non-psd quadratic is rejected at construction") {
        Mat Q(2, 2);
        Q << 1.0, 0.0, 0.0, -0.5;
        CHECK_THROWS(ConvexFunction::quadratic(Q, Vec::Zero(2), 0.0));
    }
}

TEST_CASE("infinity sentinel arithmetic") {
    // the documented rules: inf + a = inf, min(inf, a) = a
    CHECK(kInf + 3.0 == kInf);
    CHECK(std::min(kInf, 3.0) == 3.0);
    GridData g = GridData::make(Vec::Constant(1, -1.0), Vec::Constant(1, 1.0), {5});
    g.values = {kInf, 1.0, 0.0, 1.0, kInf};
    ConvexFunction f = ConvexFunction::grid(std::move(g));
    Vec x(1);
    x << 0.99;
    CHECK(f.evaluate(x) == kInf);  // interpolation against an infinite corner
    x << 0.0;
    CHECK(f.evaluate(x) == 0.0);
}
