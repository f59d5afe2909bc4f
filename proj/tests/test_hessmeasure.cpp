#include "hessval/constants.hpp"
#include "hessval/hessian_measure.hpp"
#include "hessval/ps_volume.hpp"
#include "hessval/rng.hpp"
#include "hessval/sym_matrix.hpp"
#include "hessval/body.hpp"
#include "hessval/transforms.hpp"
#include "hessval/valuation.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>

using namespace hessval;

namespace {

Mat random_psd(int n, SplitRng& rng) {
    Mat A(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) A(r, c) = rng.uniform(-1.0, 1.0);
    return Mat(A.transpose() * A);
}

}  // namespace

TEST_CASE("elementary symmetric functions") {
    SUBCASE("identity and diagonal cases") {
        CHECK(elementary_symmetric(Mat::Identity(3, 3), 2) == doctest::Approx(3.0));
        Mat D = Vec(Eigen::Vector3d(1.0, 2.0, 3.0)).asDiagonal();
        // brute-force oracle: sum over eigenvalue subsets {1*2, 1*3, 2*3}
        CHECK(elementary_symmetric(D, 2) == doctest::Approx(1 * 2 + 1 * 3 + 2 * 3));
        CHECK(elementary_symmetric(D, 0) == 1.0);
        CHECK(elementary_symmetric(D, 3) == doctest::Approx(6.0));
    }

    SUBCASE("degree bounds and symmetry are enforced") {
        CHECK_THROWS_AS(elementary_symmetric(Mat::Identity(3, 3), 4), IndexOutOfRange);
        CHECK_THROWS_AS(elementary_symmetric(Mat::Identity(3, 3), -1), IndexOutOfRange);
        Mat A(2, 2);
        A << 1.0, 2.0, 0.0, 1.0;
        CHECK_THROWS(elementary_symmetric(A, 1));
    }

    SUBCASE("Vieta property against the eigenvalue expansion") {
        SplitRng rng(7, 0);
        for (int n : {3, 5, 8}) {
            Mat A = random_psd(n, rng);
            // oracle: expand prod (1 + s lambda_i) from the eigenvalues
            Eigen::SelfAdjointEigenSolver<Mat> es(A, Eigen::EigenvaluesOnly);
            std::vector<double> coef{1.0};
            for (int i = 0; i < n; ++i) {
                std::vector<double> next(coef.size() + 1, 0.0);
                for (std::size_t k = 0; k < coef.size(); ++k) {
                    next[k] += coef[k];
                    next[k + 1] += coef[k] * es.eigenvalues()[i];
                }
                coef = std::move(next);
            }
            for (int k = 0; k <= n; ++k)
                CHECK(elementary_symmetric(A, k) ==
                      doctest::Approx(coef[k]).epsilon(1e-9));
        }
    }

    SUBCASE("radial spectrum helper agrees with the dense computation") {
        const int n = 3;
        double lt = 0.7, lr = 2.2;
        Mat A = lt * Mat::Identity(n, n);
        A(0, 0) = lr;
        for (int k = 0; k <= n; ++k)
            CHECK(elementary_symmetric_radial(n, k, lt, lr) ==
                  doctest::Approx(elementary_symmetric(A, k)).epsilon(1e-12));
    }
}

TEST_CASE("spatial marginal measures") {
    ZetaProfile hat = ZetaProfile::hat();

    SUBCASE("degree zero is Lebesgue for every input") {
        ConvexFunction q = ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0);
        Vec lo(2), hi(2);
        lo << -0.3, 0.1;
        hi << 0.5, 0.9;
        CHECK(phi_measure(q, 0).measure_of_box(lo, hi) ==
              doctest::Approx(0.8 * 0.8).epsilon(1e-12));
        ConvexFunction k = ConvexFunction::kink_sum(2, Vec::Zero(2), {0});
        CHECK(phi_measure(k, 0).measure_of_box(lo, hi) ==
              doctest::Approx(0.8 * 0.8).epsilon(1e-12));
    }

    SUBCASE("kink family: full-degree Dirac atom") {
        const int n = 2;
        Vec xbar(n);
        xbar << 0.4, -0.3;
        ConvexFunction vbar = ConvexFunction::kink_sum(n, xbar, {0, 1});
        HessianMeasure mu = phi_measure(vbar, n);
        CHECK(mu.integrate_radial(hat) == doctest::Approx(hat(xbar.norm())).epsilon(1e-14));
        Vec lo = Vec::Constant(n, 0.0), hi = Vec::Constant(n, 1.0);
        CHECK(mu.measure_of_box(lo, hi) == 0.0);  // xbar outside [0,1]^2
        lo << 0.0, -1.0;
        CHECK(mu.measure_of_box(lo, hi) == doctest::Approx(1.0));
    }

    SUBCASE("quadratic density: constant elementary symmetric") {
        const int n = 2;
        const double c = 1.3;
        ConvexFunction f =
            ConvexFunction::quadratic(Mat(c * Mat::Identity(n, n)), Vec::Zero(n), 0.0);
        Vec lo = Vec::Constant(n, -0.5), hi = Vec::Constant(n, 1.5);
        for (int j = 0; j <= n; ++j) {
            double expect = binomial(n, j) * std::pow(c, j) * 4.0;  // vol = 2^n
            CHECK(phi_measure(f, j).measure_of_box(lo, hi) ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }

    SUBCASE("cone measure: sphere atom plus exterior density") {
        const int n = 3;
        const double t = 0.5;
        HessianMeasure mu = phi_measure(ConvexFunction::radial_cone_v(n, t), 1);
        REQUIRE(mu.spheres.size() == 1);
        CHECK(mu.spheres[0].radius == doctest::Approx(t));
        CHECK(mu.spheres[0].mass ==
              doctest::Approx(unit_ball_volume(n) * binomial(n, 1) * std::pow(t, n - 1)));
        double expect = unit_ball_volume(n) * binomial(n, 1) * rho(hat, 1, n, t);
        CHECK(mu.integrate_radial(hat) == doctest::Approx(expect).epsilon(1e-12));
    }

    SUBCASE("sphere parts are apportioned by the covered fraction") {
        // in n = 2 the top-degree cone measure is the sphere part alone
        const int n = 2;
        const double t = 0.7;
        HessianMeasure mu = phi_measure(ConvexFunction::radial_cone_v(n, t), n);
        Vec lo(2), hi(2);
        lo << -2.0, -2.0;
        hi << 2.0, 2.0;
        double full = unit_ball_volume(n);  // kappa_2 C(2,2) t^0
        CHECK(mu.measure_of_box(lo, hi) == doctest::Approx(full).epsilon(1e-9));
        lo << 0.0, -2.0;  // half-plane cut through the center
        CHECK(mu.measure_of_box(lo, hi) == doctest::Approx(0.5 * full).epsilon(1e-2));
        lo << 2.0 * t, -2.0;  // entirely off the sphere
        CHECK(mu.measure_of_box(lo, hi) == doctest::Approx(0.0));
    }

    SUBCASE("general piecewise-affine inputs are rejected") {
        std::vector<PwaPiece> ps;
        Vec s(2);
        s << 0.5, 0.0;
        ps.push_back({s, 0.0, Polytope::box(Vec::Zero(2), Vec::Constant(2, 1.0))});
        ConvexFunction pwa = ConvexFunction::piecewise_affine(2, ps);
        CHECK_THROWS_AS(phi_measure(pwa, 1), UnsupportedVariant);
    }

    SUBCASE("homogeneity in the function argument") {
        SplitRng rng(11, 0);
        for (int n : {2, 3}) {
            Mat Q = random_psd(n, rng) + 0.2 * Mat::Identity(n, n);
            Vec lo = Vec::Constant(n, -1.0), hi = Vec::Constant(n, 0.7);
            for (double lambda : {0.5, 2.0, 3.0})
                for (int j = 0; j <= n; ++j) {
                    double base =
                        phi_measure(ConvexFunction::quadratic(Q, Vec::Zero(n), 0.0), j)
                            .measure_of_box(lo, hi);
                    double scaled =
                        phi_measure(ConvexFunction::quadratic(Mat(lambda * Q), Vec::Zero(n), 0.0),
                                    j)
                            .measure_of_box(lo, hi);
                    CHECK(scaled == doctest::Approx(std::pow(lambda, j) * base).epsilon(1e-6));
                }
        }
    }

    SUBCASE("non-negativity of every component") {
        CHECK(phi_measure(ConvexFunction::radial_cone_v(2, 0.7), 1).min_component() >= 0.0);
        CHECK(phi_measure(ConvexFunction::kink_sum(3, Vec::Zero(3), {0, 1}), 1).min_component() >=
              0.0);
    }
}

TEST_CASE("gradient marginals through the conjugate") {
    ZetaProfile hat = ZetaProfile::hat();

    SUBCASE("self-dual function has equal marginals") {
        ConvexFunction q = ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0);
        for (int j = 1; j <= 2; ++j)
            CHECK(psi_integral_via_conjugate(q, j, hat) ==
                  doctest::Approx(phi_measure(q, j).integrate_radial(hat)).epsilon(1e-12));
    }

    SUBCASE("cones route through the closed form") {
        for (int n : {2, 3})
            for (int j = 1; j <= n - 1; ++j)
                for (double t : {0.0, 0.4, 0.9}) {
                    double expect = unit_ball_volume(n) * binomial(n, j) * rho(hat, j, n, t);
                    CHECK(psi_integral_via_conjugate(ConvexFunction::radial_cone_u(n, t), j,
                                                     hat) == doctest::Approx(expect).epsilon(1e-8));
                }
    }

    SUBCASE("substitution identity by quadrature on both sides") {
        // u = |x|^2 (c = 2), u* = |y|^2/4
        const int n = 2;
        ConvexFunction u =
            ConvexFunction::quadratic(Mat(2.0 * Mat::Identity(n, n)), Vec::Zero(n), 0.0);
        for (int j = 1; j <= n; ++j) {
            double psi = psi_integral_via_conjugate(u, j, hat);
            double primal = valuate_smooth(ValuationSpec::primal(n, j, hat), u);
            CHECK(psi == doctest::Approx(primal).epsilon(1e-9));
        }
    }
}

TEST_CASE("graph-expansion volumes") {
    SUBCASE("ellipsoid expansion of the quadratic") {
        const int n = 2;
        const double c = 0.8;
        ConvexFunction f =
            ConvexFunction::quadratic(Mat(c * Mat::Identity(n, n)), Vec::Zero(n), 0.0);
        for (double s : {0.0, 0.5, 1.5}) {
            PsVolumeEstimate est = ps_volume(f, BaseRegion::ball(1.0), s, 200000, 42);
            double expect = unit_ball_volume(n) * std::pow(1.0 + s * c, n);
            CHECK(std::abs(est.volume - expect) <= 3.5 * est.std_error + 1e-12);
        }
    }

    SUBCASE("s = 0 reproduces the base set") {
        ConvexFunction f = ConvexFunction::quadratic(Mat::Identity(3, 3), Vec::Zero(3), 0.0);
        PsVolumeEstimate est = ps_volume(f, BaseRegion::ball(1.0), 0.0, 200000, 42);
        CHECK(std::abs(est.volume - unit_ball_volume(3)) <= 3.5 * est.std_error);
    }

    SUBCASE("cone sphere stratum sweeps the annulus") {
        const int n = 2;
        const double t = 0.6;
        ConvexFunction f = ConvexFunction::radial_cone_v(n, t);
        for (double s : {0.3, 1.0}) {
            PsVolumeEstimate est = ps_volume(f, BaseRegion::sphere(t), s, 200000, 42);
            double expect = unit_ball_volume(n) * (std::pow(t + s, n) - std::pow(t, n));
            CHECK(std::abs(est.volume - expect) <= 3.5 * est.std_error + 1e-12);
        }
    }

    SUBCASE("kink family expands its box by s on the active axes") {
        const int n = 2;
        Vec xbar(n);
        xbar << 0.2, -0.1;
        ConvexFunction f = ConvexFunction::kink_sum(n, xbar, {0, 1});
        Vec lo = Vec::Constant(n, -0.5), hi = Vec::Constant(n, 0.5);
        for (double s : {0.4, 1.0}) {
            PsVolumeEstimate est = ps_volume(f, BaseRegion::box(lo, hi), s, 200000, 42);
            double expect = (1.0 + s) * (1.0 + s);
            CHECK(std::abs(est.volume - expect) <= 3.5 * est.std_error + 1e-12);
        }
        // only the active axis expands
        ConvexFunction g = ConvexFunction::kink_sum(n, xbar, {0});
        PsVolumeEstimate est = ps_volume(g, BaseRegion::box(lo, hi), 0.5, 200000, 42);
        CHECK(std::abs(est.volume - 1.5 * 1.0) <= 3.5 * est.std_error + 1e-12);
    }

    SUBCASE("volume-polynomial fit recovers the cone's sphere atoms") {
        // closes the loop: Monte-Carlo -> polynomial coefficients -> the
        // atom masses the measure assembly writes down analytically
        const int n = 2;
        const double t = 0.6;
        ConvexFunction f = ConvexFunction::radial_cone_v(n, t);
        std::vector<double> s_grid;
        for (int k = 0; k < 6; ++k) s_grid.push_back(0.25 * (k + 1));
        ThetaCoefficients tc =
            theta_coefficients(f, BaseRegion::sphere(t), s_grid, 300000, 42);
        for (int j = 1; j <= n; ++j) {
            HessianMeasure mu = phi_measure(f, j);
            REQUIRE(mu.spheres.size() == 1);
            CHECK(std::abs(tc.value[j] - mu.spheres[0].mass) <=
                  3.5 * tc.std_error[j] + 1e-12);
        }
        CHECK(std::abs(tc.value[0]) <= 3.5 * tc.std_error[0] + 1e-9);  // no s^0 term
    }

    SUBCASE("degenerate fit grids are rejected") {
        ConvexFunction f = ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0);
        std::vector<double> bad_grid{0.5, 0.5, 0.5};
        CHECK_THROWS_AS(theta_coefficients(f, BaseRegion::ball(1.0), bad_grid, 1000, 42),
                        DegenerateFit);
    }
}

TEST_CASE("product decomposition") {
    SUBCASE("split parabolas over the unit square") {
        ConvexFunction vE = ConvexFunction::quadratic(Mat::Identity(1, 1), Vec::Zero(1), 0.0);
        ConvexFunction vF = ConvexFunction::quadratic(Mat::Identity(1, 1), Vec::Zero(1), 0.0);
        Vec lo = Vec::Zero(2), hi = Vec::Constant(2, 1.0);
        // direct density quadrature oracle: [D^2 |x|^2/2]_1 = 2 over the square
        double direct = box_quadrature(
            [](const Vec&) { return elementary_symmetric(Mat::Identity(2, 2), 1); }, lo, hi, 2);
        CHECK(product_decompose(vE, {0}, vF, {1}, 1, lo, hi) ==
              doctest::Approx(direct).epsilon(1e-12));
        CHECK(product_decompose(vE, {0}, vF, {1}, 1, lo, hi) == doctest::Approx(2.0));
        CHECK(product_decompose(vE, {0}, vF, {1}, 0, lo, hi) == doctest::Approx(1.0));
    }

    SUBCASE("flat factors kill the high degrees") {
        ConvexFunction vE = ConvexFunction::quadratic(Mat::Identity(1, 1), Vec::Zero(1), 0.0);
        ConvexFunction vF =
            ConvexFunction::quadratic(Mat::Zero(2, 2), Vec::Zero(2), 0.0);  // identically zero
        Vec lo = Vec::Zero(3), hi = Vec::Constant(3, 1.0);
        for (int l = 2; l <= 3; ++l)
            CHECK(product_decompose(vE, {0}, vF, {1, 2}, l, lo, hi) == doctest::Approx(0.0));
    }

    SUBCASE("non-contiguous axis partitions") {
        // vE lives on axes {0, 2}, vF on axis {1}
        Mat QE(2, 2);
        QE << 1.0, 0.3, 0.3, 2.0;
        ConvexFunction vE = ConvexFunction::quadratic(QE, Vec::Zero(2), 0.0);
        ConvexFunction vF =
            ConvexFunction::quadratic(Mat(0.7 * Mat::Identity(1, 1)), Vec::Zero(1), 0.0);
        Vec lo = Vec::Zero(3), hi = Vec::Constant(3, 1.0);
        Mat Q = Mat::Zero(3, 3);
        Q(0, 0) = QE(0, 0);
        Q(0, 2) = Q(2, 0) = QE(0, 1);
        Q(2, 2) = QE(1, 1);
        Q(1, 1) = 0.7;
        for (int l = 0; l <= 3; ++l) {
            double direct = elementary_symmetric(Q, l);  // constant density, unit box
            CHECK(product_decompose(vE, {0, 2}, vF, {1}, l, lo, hi) ==
                  doctest::Approx(direct).epsilon(1e-10));
        }
    }

    SUBCASE("axis partitions are validated") {
        ConvexFunction vE = ConvexFunction::quadratic(Mat::Identity(1, 1), Vec::Zero(1), 0.0);
        Vec lo = Vec::Zero(2), hi = Vec::Constant(2, 1.0);
        CHECK_THROWS_AS(product_decompose(vE, {0}, vE, {0}, 1, lo, hi), NonAlignedSubspaces);
        CHECK_THROWS_AS(product_decompose(vE, {0}, vE, {}, 1, lo, hi), NonAlignedSubspaces);
    }
}

TEST_CASE("sublevel curvature integrals are proportional to intrinsic volumes") {
    // the ratio of the curvature integral between two sublevels to the
    // intrinsic-volume difference is a dimensional constant: verify it is
    // the same across different level pairs
    const int n = 2, i = 1;
    ConvexFunction u = ConvexFunction::quadratic(Mat::Identity(n, n), Vec::Zero(n), 0.0);
    auto ratio = [&](double t1, double t2) {
        double r1 = std::sqrt(2.0 * t1), r2 = std::sqrt(2.0 * t2);
        Vec probe(n);
        double bulk = unit_sphere_measure(n) *
                      integrate_1d(
                          [&](double r) {
                              Vec x = Vec::Zero(n);
                              x[0] = r;
                              return level_set_curvature(u, x, n - i) * std::pow(r, n - 1);
                          },
                          r1, r2);
        double dv = ball_intrinsic_volume(n, i, r2) - ball_intrinsic_volume(n, i, r1);
        return bulk / dv;
    };
    CHECK(ratio(0.2, 1.0) == doctest::Approx(ratio(0.5, 2.5)).epsilon(1e-9));
    CHECK(ratio(0.2, 1.0) == doctest::Approx(ratio(0.05, 3.0)).epsilon(1e-9));
}

TEST_CASE("level set geometry of radial functions") {
    SUBCASE("curvatures of circles") {
        ConvexFunction u = ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0);
        Vec x(2);
        x << 2.0, 0.0;
        CHECK(level_set_curvature(u, x, 1) == doctest::Approx(0.5));
        CHECK(level_set_curvature(u, x, 0) == doctest::Approx(1.0));
        CHECK_THROWS_AS(level_set_curvature(u, Vec::Zero(2), 1), OriginSingularity);
    }

    SUBCASE("Lipschitz constant on sublevels") {
        ConvexFunction u = ConvexFunction::quadratic(Mat::Identity(2, 2), Vec::Zero(2), 0.0);
        CHECK(lipschitz_on_sublevel(u, 2.0) == doctest::Approx(2.0).epsilon(1e-9));
        // sampled oracle: max gradient norm over the sublevel
        SplitRng rng(3, 0);
        double best = 0.0;
        for (int k = 0; k < 20000; ++k) {
            Vec x(2);
            x << rng.uniform(-2.1, 2.1), rng.uniform(-2.1, 2.1);
            if (u.evaluate(x) <= 2.0) best = std::max(best, u.gradient(x).norm());
        }
        CHECK(lipschitz_on_sublevel(u, 2.0) >= best - 1e-9);
        CHECK(lipschitz_on_sublevel(u, 2.0) <= best + 0.05);
    }
}
