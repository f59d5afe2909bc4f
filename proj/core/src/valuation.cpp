#include "hessval/valuation.hpp"

#include "hessval/constants.hpp"
#include "hessval/hessian_measure.hpp"
#include "hessval/sym_matrix.hpp"
#include "hessval/transforms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hessval {

ValuationSpec ValuationSpec::primal(int dim, int degree, ZetaProfile zeta, Route route) {
    ValuationSpec s;
    s.dim = dim;
    s.degree = degree;
    s.zeta = std::move(zeta);
    s.side = Side::Primal;
    s.route = route;
    return s;
}

ValuationSpec ValuationSpec::dual(int dim, int degree, ZetaProfile zeta, Route route) {
    ValuationSpec s = primal(dim, degree, std::move(zeta), route);
    s.side = Side::Dual;
    return s;
}

namespace {

// sum_w w |Q d|^{-n} over the unit sphere; the angular factor of the exact
// radial reduction for quadratics.
double angular_factor(const Mat& Q, int n) {
    double acc = 0.0;
    for (const auto& [d, w] : sphere_rule(n, n == 2 ? 2048 : 720))
        acc += w / std::pow((Q * d).norm(), n);
    return acc;
}

double quadratic_primal(const ValuationSpec& spec, const QuadraticData& q) {
    const int n = spec.dim;
    const int j = spec.degree;
    Eigen::SelfAdjointEigenSolver<Mat> es(q.Q, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 1e-12)
        throw SingularHessian("valuate_smooth: primal route needs a positive definite Hessian");
    // gradient coordinates around the minimizer: the radial moment factors out
    double moment = spec.zeta.weighted_tail(n - 1, 0.0);
    return elementary_symmetric(q.Q, n - j) * moment * angular_factor(q.Q, n);
}

double radial_profile_integral(const ValuationSpec& spec, const RadialProfileData& p,
                               bool primal) {
    const int n = spec.dim;
    const int j = spec.degree;
    const double S = spec.zeta.support_bound();

    double r_hi;
    if (primal) {
        // integrand vanishes once |grad u| = phi'(r) exceeds the support
        double lo = 0.0, hi = std::isfinite(p.r_max) ? p.r_max : 1.0;
        if (!std::isfinite(p.r_max))
            while (p.deriv(hi) < S && hi < 1e6) hi *= 2;
        if (p.deriv(hi) > S) {
            for (int it = 0; it < 200; ++it) {
                double mid = 0.5 * (lo + hi);
                (p.deriv(mid) < S ? lo : hi) = mid;
            }
        }
        r_hi = hi;
    } else {
        r_hi = std::min(S, p.r_max);
    }
    auto f = [&](double r) {
        double lt = p.deriv(r) / r;
        double lr = p.deriv2(r);
        double density = elementary_symmetric_radial(n, primal ? n - j : j, lt, lr);
        double w = primal ? spec.zeta(p.deriv(r)) : spec.zeta(r);
        return w * density * std::pow(r, n - 1);
    };
    return unit_sphere_measure(n) * integrate_1d(f, 0.0, r_hi);
}

double grid_cells(const ValuationSpec& spec, const GridData& g, bool primal) {
    const int n = g.dim();
    const int j = spec.degree;
    double cell = 1.0;
    for (int a = 0; a < n; ++a) cell *= g.spacing(a);
    ConvexFunction f = ConvexFunction::grid(g);
    double total = 0.0;
    g.for_each([&](const std::vector<int>& idx, std::size_t) {
        for (int a = 0; a < n; ++a)
            if (idx[a] == 0 || idx[a] + 1 >= g.shape[a]) return;
        Vec x = g.node(idx);
        try {
            Mat H = f.hessian(x);
            double w = primal ? spec.zeta(f.gradient(x).norm()) : spec.zeta(x.norm());
            total += w * elementary_symmetric(H, primal ? n - j : j) * cell;
        } catch (const NotDifferentiable&) {
            // cells adjacent to +inf are excluded from the quadrature
        }
    });
    return total;
}

}  // namespace

double valuate_smooth(const ValuationSpec& spec, const ConvexFunction& f) {
    const int n = spec.dim;
    const int j = spec.degree;
    if (f.dim() != n) throw DimensionMismatch("valuate_smooth");
    if (j < 0 || j > n) throw IndexOutOfRange("valuate_smooth: degree");
    if (j == 0)  // constant in u: omega_n int r^{n-1} zeta(r) dr
        return unit_sphere_measure(n) * spec.zeta.weighted_tail(n - 1, 0.0);

    switch (f.variant()) {
        case Variant::Quadratic: {
            const QuadraticData& q = f.quadratic_data();
            if (spec.side == Side::Primal) return quadratic_primal(spec, q);
            return elementary_symmetric(q.Q, j) * unit_sphere_measure(n) *
                   spec.zeta.weighted_tail(n - 1, 0.0);
        }
        case Variant::RadialProfile:
            return radial_profile_integral(spec, f.profile_data(), spec.side == Side::Primal);
        case Variant::Grid:
            return grid_cells(spec, f.grid_data(), spec.side == Side::Primal);
        default:
            throw UnsupportedVariant("valuate_smooth: need a C^2 representation");
    }
}

double valuate_cone(const ValuationSpec& spec, double t) {
    const int n = spec.dim;
    const int j = spec.degree;
    if (j < 1 || j > n - 1) throw IndexOutOfRange("valuate_cone: need 1 <= j <= n-1");
    if (t < 0.0) throw Error("valuate_cone: t must be >= 0");
    if (spec.zeta.claimed_class) {
        // a profile tagged with index j0 is admissible for every degree <= j0
        auto [cj, cn] = *spec.zeta.claimed_class;
        if (cn != n || j > cj)
            throw ClassViolation("valuate_cone: profile tagged (" + std::to_string(cj) + "," +
                                 std::to_string(cn) + ") used at degree " + std::to_string(j) +
                                 " in dimension " + std::to_string(n));
    }
    return unit_ball_volume(n) * binomial(n, j) * rho(spec.zeta, j, n, t);
}

double valuate_moreau_at(const ValuationSpec& spec, const ConvexFunction& u, double lambda) {
    ValuationSpec s = spec;
    s.side = Side::Primal;
    s.route = Route::Quadrature;
    return valuate_smooth(s, moreau_yosida(u, lambda));
}

namespace {

double condition_estimate(const Mat& M) {
    Mat inv = M.inverse();
    auto norm1 = [](const Mat& A) { return A.cwiseAbs().colwise().sum().maxCoeff(); };
    return norm1(M) * norm1(inv);
}

}  // namespace

MoreauResult valuate_moreau(const ValuationSpec& spec, const ConvexFunction& u) {
    const int n = spec.dim;
    const int j = spec.degree;
    std::vector<double> lambdas = spec.lambdas;
    if (lambdas.empty())
        for (int k = 1; k <= j + 1; ++k) lambdas.push_back(k);
    if (static_cast<int>(lambdas.size()) != j + 1)
        throw Error("valuate_moreau: need exactly j+1 lambda nodes");

    Vec rhs(j + 1);
    for (int k = 0; k <= j; ++k) rhs[k] = valuate_moreau_at(spec, u, lambdas[k]);

    // Z_{j,zeta,lambda} = sum_{i=0}^{j} C(n-i, j-i) lambda^{j-i} Z_i
    Mat M(j + 1, j + 1);
    for (int k = 0; k <= j; ++k)
        for (int i = 0; i <= j; ++i)
            M(k, i) = binomial(n - i, j - i) * std::pow(lambdas[k], j - i);

    double cond = condition_estimate(M);
    if (!std::isfinite(cond) || cond > 1e12)
        throw IllConditionedVandermonde("valuate_moreau: condition " + std::to_string(cond));

    Vec sol = Eigen::PartialPivLU<Mat>(M).solve(rhs);
    MoreauResult out;
    out.value = sol[j];
    out.components = sol;
    out.smoothed = rhs;
    out.condition = cond;
    return out;
}

double valuate(const ValuationSpec& spec, const ConvexFunction& f) {
    const int n = spec.dim;
    const int j = spec.degree;
    if (j == 0) return unit_sphere_measure(n) * spec.zeta.weighted_tail(n - 1, 0.0);

    if (spec.route == Route::Moreau) return valuate_moreau(spec, f).value;
    if (spec.route == Route::ClosedForm) {
        switch (f.variant()) {
            case Variant::RadialConeU:
            case Variant::RadialConeV:
            case Variant::KinkSum:
            case Variant::IndicatorLinear:
            case Variant::PiecewiseAffine:
                break;  // these dispatch to exact routes below
            default:
                throw UnsupportedVariant("valuate: no closed form for this variant");
        }
    }

    if (spec.side == Side::Primal) {
        switch (f.variant()) {
            case Variant::RadialConeU:
                // exact through the gradient marginal of the conjugate
                return psi_integral_via_conjugate(f, j, spec.zeta);
            case Variant::IndicatorLinear: {
                if (j != n)
                    throw UnsupportedVariant(
                        "valuate: indicator+linear inputs support only degree n");
                const IndicatorLinearData& d = f.indicator_data();
                return spec.zeta(d.slope.norm()) * d.region.volume();
            }
            case Variant::PiecewiseAffine: {
                if (j != n)
                    throw UnsupportedVariant(
                        "valuate: piecewise-affine inputs support only degree n");
                double total = 0.0;
                for (const PwaPiece& p : f.pwa_pieces())
                    total += spec.zeta(p.slope.norm()) * p.region.volume();
                return total;
            }
            default:
                return valuate_smooth(spec, f);
        }
    }
    // dual side
    switch (f.variant()) {
        case Variant::RadialConeV:
        case Variant::KinkSum:
            return phi_measure(f, j).integrate_radial(spec.zeta);
        default:
            return valuate_smooth(spec, f);
    }
}

std::vector<double> homogeneous_components(
    const std::function<double(const ConvexFunction&)>& Z, const ConvexFunction& u, int n) {
    Mat M(n + 1, n + 1);
    Vec rhs(n + 1);
    for (int k = 0; k <= n; ++k) {
        double lambda = k + 1;
        rhs[k] = Z(epi_multiply(u, lambda));
        for (int i = 0; i <= n; ++i) M(k, i) = std::pow(lambda, i);
    }
    double cond = condition_estimate(M);
    if (!std::isfinite(cond) || cond > 1e12)
        throw IllConditionedVandermonde("homogeneous_components: condition " +
                                        std::to_string(cond));
    Vec sol = Eigen::PartialPivLU<Mat>(M).solve(rhs);
    return std::vector<double>(sol.data(), sol.data() + n + 1);
}

namespace {

// One-dimensional quadratic piece q/2 (x - m)^2 + c on [a, b].
struct QuadPiece {
    double q, m, c;
    double a, b;
};

QuadPiece to_piece(const QuadraticData& d, double a, double b) {
    // q/2 x^2 + b x + c rewritten around its vertex
    double q = d.Q(0, 0);
    double m = q > 0 ? -d.b[0] / q : 0.0;
    double c = d.c - 0.5 * q * m * m;
    return {q, m, c, a, b};
}

// int over the piece of zeta(|w'|) [w'']_{1-j} dx, j in {0, 1}
double piece_valuation(const ValuationSpec& spec, const QuadPiece& p) {
    const double S = spec.zeta.support_bound();
    double lo = p.a, hi = p.b;
    if (p.q > 0) {
        // restrict to |w'| = q |x - m| <= S
        lo = std::max(lo, p.m - S / p.q);
        hi = std::min(hi, p.m + S / p.q);
    }
    if (hi <= lo) return 0.0;
    auto f = [&](double x) {
        double slope = std::abs(p.q * (x - p.m));
        double dens = spec.degree == 1 ? 1.0 : p.q;  // [w'']_{1-j}
        return spec.zeta(slope) * dens;
    };
    return integrate_1d_split(f, lo, hi, {p.m});
}

}  // namespace

double valuation_property_residual(const ValuationSpec& spec, const ConvexFunction& u,
                                   const ConvexFunction& v) {
    if (spec.dim == 1 && u.variant() == Variant::Quadratic && v.variant() == Variant::Quadratic) {
        // The lattice pair of two parabolas is piecewise C^2 with breakpoints
        // at the crossings; every term is integrated piecewise, so the
        // identity holds pointwise under the integrals.
        const QuadraticData& du = u.quadratic_data();
        const QuadraticData& dv = v.quadratic_data();
        // crossings of u - v: quadratic equation
        double A = 0.5 * (du.Q(0, 0) - dv.Q(0, 0));
        double B = du.b[0] - dv.b[0];
        double C = du.c - dv.c;
        std::vector<double> cuts;
        if (std::abs(A) < 1e-14) {
            if (std::abs(B) > 1e-14) cuts.push_back(-C / B);
        } else {
            double disc = B * B - 4 * A * C;
            if (disc > 0) {
                cuts.push_back((-B - std::sqrt(disc)) / (2 * A));
                cuts.push_back((-B + std::sqrt(disc)) / (2 * A));
            }
        }
        std::sort(cuts.begin(), cuts.end());

        // a window that certainly contains the support of every integrand
        const double S = spec.zeta.support_bound();
        double W = 4.0 + 2.0 * S / std::max(1e-9, std::min(du.Q(0, 0), dv.Q(0, 0)));
        for (double c : cuts) W = std::max(W, std::abs(c) * 2 + 4.0);
        std::vector<double> edges{-W};
        for (double c : cuts)
            if (c > -W && c < W) edges.push_back(c);
        edges.push_back(W);

        auto total = [&](bool take_max, bool mixed) {
            // mixed=false: integrate u (or v) alone
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
                double a = edges[i], b = edges[i + 1], mid = 0.5 * (a + b);
                double fu = u.evaluate(Vec::Constant(1, mid));
                double fv = v.evaluate(Vec::Constant(1, mid));
                const QuadraticData& src =
                    !mixed ? (take_max ? du : dv) : ((fu >= fv) == take_max ? du : dv);
                acc += piece_valuation(spec, to_piece(src, a, b));
            }
            return acc;
        };
        double Zu = total(true, false);
        double Zv = total(false, false);
        double Zmax = total(true, true);
        double Zmin = total(false, true);
        return std::abs(Zu + Zv - Zmax - Zmin);
    }

    ConvexFunction vmax = pointwise_max(u, v);
    ConvexFunction vmin = pointwise_min(u, v);  // throws NonConvexMin if not convex
    double Zu = valuate(spec, u);
    double Zv = valuate(spec, v);
    double Zx = valuate(spec, vmax);
    double Zn = valuate(spec, vmin);
    return std::abs(Zu + Zv - Zx - Zn);
}

double pwa_additivity_residual(const ValuationSpec& spec, const ConvexFunction& pwa) {
    if (pwa.variant() != Variant::PiecewiseAffine)
        throw UnsupportedVariant("pwa_additivity_residual");
    if (spec.degree != spec.dim)
        throw UnsupportedVariant("pwa_additivity_residual: degree-n only");
    double whole = valuate(spec, pwa);
    double sum = 0.0;
    for (const PwaPiece& p : pwa.pwa_pieces())
        sum += valuate(spec, ConvexFunction::indicator_linear(p.region, p.slope));
    return std::abs(whole - sum);
}

double invariance_residual(const ValuationSpec& spec, const ConvexFunction& u, const Vec& shift,
                           double offset, const Mat& rotation) {
    if (u.variant() != Variant::Quadratic)
        throw UnsupportedVariant("invariance_residual: quadratic inputs only");
    const QuadraticData& q = u.quadratic_data();
    double base = valuate(spec, u);

    // u(x - x0) + alpha
    Mat Q = q.Q;
    Vec b = q.b - q.Q * shift;
    double c = 0.5 * shift.dot(q.Q * shift) - q.b.dot(shift) + q.c + offset;
    double translated = valuate(spec, ConvexFunction::quadratic(Q, b, c));

    // u(R^{-1} x)
    Mat Qr = rotation * q.Q * rotation.transpose();
    Vec br = rotation * q.b;
    double rotated = valuate(spec, ConvexFunction::quadratic(Qr, br, q.c));

    return std::max(std::abs(translated - base), std::abs(rotated - base));
}

namespace {

struct RadialView {
    std::function<double(double)> phi, dphi, ddphi;
    double r_of_level(double t) const {
        double lo = 0.0, hi = 1.0;
        while (phi(hi) < t && hi < 1e9) hi *= 2;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            (phi(mid) < t ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }
};

RadialView radial_view(const ConvexFunction& u) {
    const int n = u.dim();
    if (u.variant() == Variant::RadialProfile) {
        const RadialProfileData p = u.profile_data();
        return {[p](double r) { return p.value(r); }, [p](double r) { return p.deriv(r); },
                [p](double r) { return p.deriv2(r); }};
    }
    if (u.variant() == Variant::Quadratic) {
        const QuadraticData& q = u.quadratic_data();
        if ((q.Q - q.Q(0, 0) * Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12 ||
            q.b.norm() > 1e-12)
            throw NonRadial("reilly_identity_residual: quadratic is not radial");
        double cva = q.Q(0, 0), c0 = q.c;
        return {[cva, c0](double r) { return 0.5 * cva * r * r + c0; },
                [cva](double r) { return cva * r; }, [cva](double) { return cva; }};
    }
    throw NonRadial("reilly_identity_residual: need a radial input");
}

}  // namespace

double reilly_identity_residual(const ZetaProfile& zeta, int j, const ConvexFunction& u,
                                double t1, double t2) {
    const int n = u.dim();
    if (j < 1 || j > n - 1) throw IndexOutOfRange("reilly_identity_residual");
    if (!(0 < t1 && t1 <= t2)) throw Error("reilly_identity_residual: need 0 < t1 <= t2");
    RadialView rv = radial_view(u);
    const double r1 = rv.r_of_level(t1), r2 = rv.r_of_level(t2);
    const double wn = unit_sphere_measure(n);

    auto lhs_f = [&](double r) {
        return zeta(rv.dphi(r)) *
               elementary_symmetric_radial(n, n - j, rv.dphi(r) / r, rv.ddphi(r)) *
               std::pow(r, n - 1);
    };
    double lhs = wn * integrate_1d(lhs_f, r1, r2);

    auto bulk_f = [&](double r) {
        double tau = binomial(n - 1, n - j) / std::pow(r, n - j);
        return rho(zeta, j, n, rv.dphi(r)) * tau * std::pow(r, n - 1);
    };
    double bulk = wn * integrate_1d(bulk_f, r1, r2);

    auto boundary = [&](double r) {
        double tau = binomial(n - 1, n - j - 1) / std::pow(r, n - j - 1);
        return wn * std::pow(r, n - 1) * eta(zeta, j, n, rv.dphi(r)) * tau;
    };
    return std::abs(lhs - (bulk - boundary(r2) + boundary(r1)));
}

}  // namespace hessval
