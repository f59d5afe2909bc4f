#include "hessval/selfcheck.hpp"

#include "hessval/abel.hpp"
#include "hessval/body.hpp"
#include "hessval/constants.hpp"
#include "hessval/hessian_measure.hpp"
#include "hessval/ps_volume.hpp"
#include "hessval/rng.hpp"
#include "hessval/sym_matrix.hpp"
#include "hessval/transforms.hpp"
#include "hessval/valuation.hpp"
#include "hessval/zeta_recovery.hpp"

#include <chrono>
#include <cmath>
#include <functional>

namespace hessval {

namespace {

using Clock = std::chrono::steady_clock;

struct Battery {
    Suite suite;
    std::uint64_t seed;
    std::vector<CheckResult> results;

    void run(int criterion, const std::string& name, double bound, const std::string& detail,
             const std::function<double()>& worst_of) {
        CheckResult r;
        r.criterion = criterion;
        r.name = name;
        r.bound = bound;
        r.detail = detail;
        auto t0 = Clock::now();
        try {
            r.worst = worst_of();
            r.pass = r.worst <= bound;
        } catch (const std::exception& e) {
            r.pass = false;
            r.worst = kInf;
            r.detail = e.what();
        }
        r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
        results.push_back(std::move(r));
    }
};

ZetaProfile bump_profile(double lo, double hi) {
    double c = 0.5 * (lo + hi), w = 0.5 * (hi - lo);
    return ZetaProfile::from_function(
        [c, w](double s) {
            double q = (s - c) / w;
            return std::abs(q) < 1.0 ? (1 - q * q) * (1 - q * q) : 0.0;
        },
        hi);
}

ZetaProfile tent_profile(double lo, double hi) {
    double c = 0.5 * (lo + hi);
    return ZetaProfile::from_samples({lo > 0 ? lo : 1e-9, c, hi}, {0.0, 1.0, 0.0}, hi);
}

ZetaProfile gaussian_profile(double support = 6.0) {
    return ZetaProfile::from_function([](double s) { return std::exp(-s * s); }, support);
}

double rel_gap(double value, double reference) {
    return std::abs(value - reference) / std::max(std::abs(reference), 1e-9);
}

Mat random_spd(int n, SplitRng& rng) {
    Mat A(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) A(r, c) = rng.uniform(-1.0, 1.0);
    return Mat(A.transpose() * A + 0.3 * Mat::Identity(n, n));
}

}  // namespace

std::vector<CheckResult> run_selfcheck(Suite suite, std::uint64_t seed) {
    Battery b{suite, seed, {}};
    const bool full = suite == Suite::Full;

    // 1. cone closed form: measure route vs kappa_n C(n,j) rho(t)
    b.run(1, "cone_closed_form", 1e-6, "sphere atom + exterior density vs closed form", [&] {
        ZetaProfile hat = ZetaProfile::hat();
        double worst = 0.0;
        for (int n : {2, 3})
            for (int j = 1; j <= n - 1; ++j)
                for (double t : {0.0, 0.25, 0.5, 0.9, 1.5}) {
                    double closed = unit_ball_volume(n) * binomial(n, j) * rho(hat, j, n, t);
                    double measured = phi_measure(ConvexFunction::radial_cone_v(n, t), j)
                                          .integrate_radial(hat);
                    worst = std::max(worst,
                                     std::abs(measured - closed) / std::max(std::abs(closed), 1e-9));
                }
        return worst;
    });

    // 2. substitution duality on random positive definite quadratics
    b.run(2, "substitution_duality", 1e-4, "primal gradient form vs dual spatial form", [&] {
        std::vector<ZetaProfile> zetas;
        zetas.push_back(ZetaProfile::hat());
        zetas.push_back(bump_profile(0.2, 1.2));
        zetas.push_back(gaussian_profile(4.0));
        const int cases = full ? 6 : 2;
        double worst = 0.0;
        SplitRng rng(seed, 2);
        for (int n : {2, 3})
            for (int k = 0; k < cases; ++k) {
                Mat Q = random_spd(n, rng);
                Vec bb(n);
                for (int a = 0; a < n; ++a) bb[a] = rng.uniform(-0.5, 0.5);
                ConvexFunction u = ConvexFunction::quadratic(Q, bb, rng.uniform(-1.0, 1.0));
                ConvexFunction v = *conjugate_exact(u);
                for (const ZetaProfile& z : zetas)
                    for (int j = 1; j <= n; ++j)
                        worst = std::max(
                            worst, rel_gap(valuate_smooth(ValuationSpec::primal(n, j, z), u),
                                           valuate_smooth(ValuationSpec::dual(n, j, z), v)));
            }
        return worst;
    });

    // 3. Moreau-Vandermonde: binomial expansion and lambda-sweep recovery
    b.run(3, "moreau_expansion", 1e-6, "smoothed valuation vs binomial expansion", [&] {
        ZetaProfile hat = ZetaProfile::hat();
        SplitRng rng(seed, 3);
        double worst = 0.0;
        for (int n : {2, 3}) {
            ConvexFunction u = ConvexFunction::quadratic(random_spd(n, rng), Vec::Zero(n), 0.0);
            for (int j = 1; j <= n; ++j) {
                std::vector<double> Zi(j + 1);
                for (int i = 0; i <= j; ++i)
                    Zi[i] = valuate_smooth(ValuationSpec::primal(n, i, hat), u);
                for (double lam : {1.0, 2.0, 3.0}) {
                    double lhs = valuate_moreau_at(ValuationSpec::primal(n, j, hat), u, lam);
                    double rhs = 0.0;
                    for (int i = 0; i <= j; ++i)
                        rhs += binomial(n - i, j - i) * std::pow(lam, j - i) * Zi[i];
                    worst = std::max(worst, rel_gap(lhs, rhs));
                }
            }
        }
        return worst;
    });
    b.run(3, "moreau_recovery", 1e-4, "degree-j component from the lambda sweep", [&] {
        ZetaProfile hat = ZetaProfile::hat();
        SplitRng rng(seed, 33);
        double worst = 0.0;
        for (int n : {2, 3}) {
            ConvexFunction u = ConvexFunction::quadratic(random_spd(n, rng), Vec::Zero(n), 0.0);
            for (int j = 1; j <= n; ++j) {
                double direct = valuate_smooth(ValuationSpec::primal(n, j, hat), u);
                MoreauResult mr = valuate_moreau(ValuationSpec::primal(n, j, hat), u);
                worst = std::max(worst, rel_gap(mr.value, direct));
            }
        }
        return worst;
    });

    // 4. zeta recovery round trip from synthesized cone values
    b.run(4, "zeta_recovery_round_trip", 1e-3, "sup-gap on [0.05, S] after recovery", [&] {
        double worst = 0.0;
        for (int n : {2, 3}) {
            std::vector<ZetaProfile> profiles;
            profiles.push_back(ZetaProfile::hat());
            profiles.push_back(bump_profile(0.2, 0.8));
            profiles.push_back(tent_profile(0.1, 0.9));
            for (const ZetaProfile& z : profiles) {
                RecoveryResult rec =
                    recover_zeta_from_cone_values(synthesize_cone_values(z, n), n, 1e-3);
                double S = z.support_bound();
                for (int k = 0; k <= 400; ++k) {
                    double t = 0.05 + (S - 0.05) * k / 400.0;
                    worst = std::max(worst, std::abs(rec.zeta(t) - z(t)));
                }
            }
        }
        return worst;
    });
    b.run(4, "zeta_recovery_limit", 1e-3, "t^{n-1} tail integral vs Z(u_0)/(n-1)", [&] {
        double worst = 0.0;
        for (int n : {2, 3}) {
            for (const ZetaProfile& z :
                 {ZetaProfile::hat(), bump_profile(0.2, 0.8), tent_profile(0.1, 0.9)}) {
                RecoveryResult rec =
                    recover_zeta_from_cone_values(synthesize_cone_values(z, n), n, 1e-3);
                worst = std::max(worst, rec.limit_certificate);
            }
        }
        return worst;
    });

    // 5. Abel transform
    b.run(5, "abel_gaussian_forward", 1e-6, "truncated Gaussian vs (sqrt(pi)/2) e^{-t^2}", [&] {
        ZetaProfile g = gaussian_profile(6.0);
        double worst = 0.0;
        for (double t : {0.0, 0.5, 1.0, 2.0})
            worst = std::max(worst,
                             std::abs(abel_forward(g, t) - 0.5 * std::sqrt(M_PI) * std::exp(-t * t)));
        return worst;
    });
    b.run(5, "abel_round_trip", 1e-3, "inverse of forward on a C^1 bump", [&] {
        ZetaProfile bump = bump_profile(0.4, 1.6);
        ZetaProfile fwd = abel_forward_profile(bump, 2048);
        double worst = 0.0;
        for (int k = 0; k <= 200; ++k) {
            double s = 0.05 + (1.8 - 0.05) * k / 200.0;
            worst = std::max(worst, std::abs(abel_inverse(fwd, s) - bump(s)));
        }
        return worst;
    });

    // 6. Hessian measure structure
    b.run(6, "theta_coefficients_3sigma", 1.0, "|coefficient - kappa_n C(n,j) c^j| / (3 sigma)", [&] {
        const std::size_t samples = full ? 1000000 : 150000;
        double worst = 0.0;
        for (int n : {2, 3}) {
            const double c = 0.8;
            ConvexFunction f =
                ConvexFunction::quadratic(Mat(c * Mat::Identity(n, n)), Vec::Zero(n), 0.0);
            std::vector<double> s_grid;
            for (int k = 0; k < 8; ++k) s_grid.push_back(0.2 * (k + 1));
            ThetaCoefficients tc =
                theta_coefficients(f, BaseRegion::ball(1.0), s_grid, samples, seed);
            for (int j = 0; j <= n; ++j) {
                double expect = unit_ball_volume(n) * binomial(n, j) * std::pow(c, j);
                worst = std::max(worst, std::abs(tc.value[j] - expect) /
                                            (3.0 * std::max(tc.std_error[j], 1e-12)));
            }
        }
        return worst;
    });
    b.run(6, "product_decomposition", 1e-4, "factorized measure vs direct quadrature", [&] {
        SplitRng rng(seed, 6);
        double worst = 0.0;
        for (int n : {2, 3})
            for (int k = 1; k < n; ++k) {
                Mat QE = random_spd(k, rng), QF = random_spd(n - k, rng);
                ConvexFunction vE = ConvexFunction::quadratic(QE, Vec::Zero(k), 0.0);
                ConvexFunction vF = ConvexFunction::quadratic(QF, Vec::Zero(n - k), 0.0);
                std::vector<int> axesE, axesF;
                for (int a = 0; a < k; ++a) axesE.push_back(a);
                for (int a = k; a < n; ++a) axesF.push_back(a);
                Vec lo = Vec::Constant(n, 0.0), hi = Vec::Constant(n, 1.0);
                Mat Q = Mat::Zero(n, n);
                Q.topLeftCorner(k, k) = QE;
                Q.bottomRightCorner(n - k, n - k) = QF;
                for (int l = 0; l <= n; ++l) {
                    double assembled = product_decompose(vE, axesE, vF, axesF, l, lo, hi);
                    double direct = box_quadrature(
                        [&](const Vec&) { return elementary_symmetric(Q, l); }, lo, hi, 2);
                    worst = std::max(worst, rel_gap(assembled, direct));
                }
            }
        return worst;
    });
    b.run(6, "kink_atoms_exact", 1e-12, "Dirac structure of the kink family", [&] {
        const int n = 3;
        Vec xbar(n);
        xbar << 0.3, -0.4, 0.2;
        ConvexFunction vbar = ConvexFunction::kink_sum(n, xbar, {0, 1, 2});
        HessianMeasure mu = phi_measure(vbar, n);
        ZetaProfile hat = ZetaProfile::hat();
        double worst = std::abs(mu.integrate_radial(hat) - hat(xbar.norm()));
        worst = std::max(worst, std::abs(mu.measure_of_box(Vec::Constant(n, -1.0),
                                                           Vec::Constant(n, 1.0)) -
                                         1.0));
        // the degree-j marginal of a j-kink sum: slab through (xbar_1, ..., xbar_j)
        ConvexFunction vj = ConvexFunction::kink_sum(n, xbar, {0, 1});
        HessianMeasure mj = phi_measure(vj, 2);
        Vec lo = Vec::Constant(n, -1.0), hi = Vec::Constant(n, 1.0);
        worst = std::max(worst, std::abs(mj.measure_of_box(lo, hi) - 2.0));  // free axis length
        // and it vanishes above the kink count
        worst = std::max(worst, std::abs(phi_measure(vj, 3).measure_of_box(lo, hi)));
        return worst;
    });

    // 7. valuation + invariance battery
    b.run(7, "valuation_identity_1d", 1e-4, "Z(u)+Z(v) = Z(max)+Z(min), piecewise C^2", [&] {
        ZetaProfile hat = ZetaProfile::hat();
        ConvexFunction u = ConvexFunction::quadratic(Mat(Mat::Identity(1, 1)), Vec::Zero(1), 0.0);
        Vec bb(1);
        bb << -0.3;
        ConvexFunction v = ConvexFunction::quadratic(Mat(Mat::Identity(1, 1)), bb, 0.045);
        ValuationSpec spec = ValuationSpec::primal(1, 1, hat);
        double worst = valuation_property_residual(spec, u, v);
        worst = std::max(worst, valuation_property_residual(spec, u, u));  // u = v edge
        return worst;
    });
    b.run(7, "pwa_additivity", 1e-6, "degree-n additivity over a 2-piece dissection", [&] {
        std::vector<Vec> t1(3, Vec(2)), t2(3, Vec(2));
        t1[0] << 0, 0;
        t1[1] << 1, 0;
        t1[2] << 1, 1;
        t2[0] << 0, 0;
        t2[1] << 1, 1;
        t2[2] << 0, 1;
        Vec a1(2), a2(2);
        a1 << 0.5, 0.0;
        a2 << 0.0, 0.5;
        std::vector<PwaPiece> pieces;
        pieces.push_back({a1, 0.0, Polytope::hull_2d(t1)});
        pieces.push_back({a2, 0.0, Polytope::hull_2d(t2)});
        ConvexFunction pwa = ConvexFunction::piecewise_affine(2, std::move(pieces));
        return pwa_additivity_residual(ValuationSpec::primal(2, 2, ZetaProfile::hat()), pwa);
    });
    b.run(7, "invariance_quadratics", 1e-4, "epi-translation and rotation defects", [&] {
        ZetaProfile hat = ZetaProfile::hat();
        Mat Q(2, 2);
        Q << 1, 0, 0, 4;
        ConvexFunction u = ConvexFunction::quadratic(Q, Vec::Zero(2), 0.0);
        Vec shift(2);
        shift << 0.4, -0.2;
        double angle = M_PI / 6;
        Mat R(2, 2);
        R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
        double worst = 0.0;
        for (int j = 1; j <= 2; ++j)
            worst = std::max(worst,
                             invariance_residual(ValuationSpec::primal(2, j, hat), u, shift, 3.0, R));
        return worst;
    });

    // 8. Reilly-type identity
    b.run(8, "reilly_identity", 1e-5, "three-term identity on sublevels (0.5, 2) of |x|^2/2", [&] {
        ConvexFunction u =
            ConvexFunction::quadratic(Mat(Mat::Identity(2, 2)), Vec::Zero(2), 0.0);
        return reilly_identity_residual(ZetaProfile::hat(), 1, u, 0.5, 2.0);
    });

    // 9. geometry
    b.run(9, "intrinsic_volumes", 1e-3, "Steiner fit on the unit square and disc", [&] {
        Body square = Body::polytope(Polytope::box(Vec::Zero(2), Vec::Constant(2, 1.0)));
        auto V = intrinsic_volumes(square);
        double worst =
            std::max({std::abs(V[0] - 1.0), std::abs(V[1] - 2.0), std::abs(V[2] - 1.0)});
        Body disc = Body::ball(Vec::Zero(2), 1.0);
        auto W = intrinsic_volumes(disc);
        worst = std::max(
            {worst, std::abs(W[0] - 1.0), std::abs(W[1] - M_PI), std::abs(W[2] - M_PI)});
        return worst;
    });
    b.run(9, "dissection_2d_exact", 1e-6, "piece volumes tile the simplex (exact)", [&] {
        Vec x0 = Vec::Zero(2);
        Vec e1(2), e2(2);
        e1 << 1, 0;
        e2 << 0, 1;
        OrthogonalSimplex S{x0, {e1, e2}};
        double worst = 0.0;
        for (double t : {0.25, 0.5, 0.75}) {
            auto pieces = canonical_dissection(S, t);
            double sum = 0.0;
            for (const auto& p : pieces) sum += p.volume();
            worst = std::max(worst, std::abs(sum - S.volume()));
        }
        return worst;
    });
    b.run(9, "dissection_3d_3sigma", 1.0, "Monte-Carlo piece volumes vs exact total", [&] {
        const std::size_t samples = full ? 1000000 : 150000;
        Vec x0(3);
        x0 << 0.1, -0.2, 0.0;
        Vec e1(3), e2(3), e3(3);
        e1 << 1, 1, 0;
        e2 << -0.5, 0.5, 0;
        e3 << 0, 0, 0.8;
        OrthogonalSimplex S{x0, {e1, e2, e3}};
        auto pieces = canonical_dissection(S, 0.5);
        double sum = 0.0, var = 0.0;
        for (std::size_t i = 0; i < pieces.size(); ++i) {
            McVolume mv = mc_volume(pieces[i], samples, seed + i);
            sum += mv.volume;
            var += mv.std_error * mv.std_error;
        }
        return std::abs(sum - S.volume()) / std::max(3.0 * std::sqrt(var), 1e-12);
    });

    return b.results;
}

}  // namespace hessval
