#include "hessval/convex_function.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>

namespace hessval {

// --- RadialProfileData ---

double RadialProfileData::value(double r) const {
    if (analytic()) return phi(r);
    const int n = static_cast<int>(samples.size());
    const double h = r_max / (n - 1);
    double t = std::min(std::max(r / h, 0.0), double(n - 1));
    int i = std::min(static_cast<int>(std::floor(t)), n - 2);
    double f = t - i;
    return (1.0 - f) * samples[i] + f * samples[i + 1];
}

double RadialProfileData::deriv(double r) const {
    if (analytic()) return dphi(r);
    const int n = static_cast<int>(samples.size());
    const double h = r_max / (n - 1);
    if (r < h) return (-3.0 * value(r) + 4.0 * value(r + h) - value(r + 2 * h)) / (2 * h);
    if (r > r_max - h) return (3.0 * value(r) - 4.0 * value(r - h) + value(r - 2 * h)) / (2 * h);
    return (value(r + h) - value(r - h)) / (2 * h);
}

double RadialProfileData::deriv2(double r) const {
    if (analytic()) return ddphi(r);
    const int n = static_cast<int>(samples.size());
    const double h = r_max / (n - 1);
    double rc = std::min(std::max(r, h), r_max - h);
    return (value(rc + h) - 2.0 * value(rc) + value(rc - h)) / (h * h);
}

// --- constructors ---

ConvexFunction ConvexFunction::grid(GridData g) {
    ConvexFunction f;
    f.variant_ = Variant::Grid;
    f.dim_ = g.dim();
    f.grid_ = std::make_shared<const GridData>(std::move(g));
    return f;
}

ConvexFunction ConvexFunction::piecewise_affine(int dim, std::vector<PwaPiece> pieces) {
    if (pieces.empty()) throw EmptyDomain("piecewise_affine: no pieces");
    for (const PwaPiece& p : pieces)
        if (p.slope.size() != dim || p.region.dim() != dim)
            throw DimensionMismatch("piecewise_affine: piece dimension");
    ConvexFunction f;
    f.variant_ = Variant::PiecewiseAffine;
    f.dim_ = dim;
    f.pieces_ = std::make_shared<const std::vector<PwaPiece>>(std::move(pieces));
    return f;
}

ConvexFunction ConvexFunction::quadratic(Mat Q, Vec b, double c) {
    const int n = static_cast<int>(Q.rows());
    if (Q.cols() != n || b.size() != n) throw DimensionMismatch("quadratic");
    Mat Qs = 0.5 * (Q + Q.transpose());
    Eigen::SelfAdjointEigenSolver<Mat> es(Qs, Eigen::EigenvaluesOnly);
    double scale = Qs.cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() < -convexity_tolerance(scale))
        throw Error("quadratic: Q is not positive semi-definite");
    ConvexFunction f;
    f.variant_ = Variant::Quadratic;
    f.dim_ = n;
    f.quad_ = std::make_shared<const QuadraticData>(QuadraticData{std::move(Qs), std::move(b), c});
    return f;
}

ConvexFunction ConvexFunction::radial_cone_u(int dim, double t, double ball_radius) {
    if (t < 0.0) throw Error("radial_cone_u: t must be >= 0");
    if (ball_radius <= 0.0) throw NonpositiveScale("radial_cone_u: ball_radius");
    ConvexFunction f;
    f.variant_ = Variant::RadialConeU;
    f.dim_ = dim;
    f.cone_ = std::make_shared<const RadialConeData>(RadialConeData{t, ball_radius, 1.0});
    return f;
}

ConvexFunction ConvexFunction::radial_cone_v(int dim, double t, double scale) {
    if (t < 0.0) throw Error("radial_cone_v: t must be >= 0");
    if (scale <= 0.0) throw NonpositiveScale("radial_cone_v: scale");
    ConvexFunction f;
    f.variant_ = Variant::RadialConeV;
    f.dim_ = dim;
    f.cone_ = std::make_shared<const RadialConeData>(RadialConeData{t, 1.0, scale});
    return f;
}

ConvexFunction ConvexFunction::radial_profile(int dim, double r_max, std::vector<double> samples) {
    if (samples.size() < 3) throw Error("radial_profile: need >= 3 samples");
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        double mid = samples[i], avg = 0.5 * (samples[i - 1] + samples[i + 1]);
        if (mid > avg + convexity_tolerance(std::abs(mid)))
            throw Error("radial_profile: sample array is not convex");
    }
    ConvexFunction f;
    f.variant_ = Variant::RadialProfile;
    f.dim_ = dim;
    RadialProfileData d;
    d.r_max = r_max;
    d.samples = std::move(samples);
    f.profile_ = std::make_shared<const RadialProfileData>(std::move(d));
    return f;
}

ConvexFunction ConvexFunction::radial_profile(int dim, double r_max,
                                              std::function<double(double)> phi,
                                              std::function<double(double)> dphi,
                                              std::function<double(double)> ddphi) {
    ConvexFunction f;
    f.variant_ = Variant::RadialProfile;
    f.dim_ = dim;
    RadialProfileData d;
    d.r_max = r_max;
    d.phi = std::move(phi);
    d.dphi = std::move(dphi);
    d.ddphi = std::move(ddphi);
    f.profile_ = std::make_shared<const RadialProfileData>(std::move(d));
    return f;
}

ConvexFunction ConvexFunction::indicator_linear(Polytope region, Vec slope) {
    if (region.dim() != slope.size()) throw DimensionMismatch("indicator_linear");
    ConvexFunction f;
    f.variant_ = Variant::IndicatorLinear;
    f.dim_ = region.dim();
    f.indicator_ = std::make_shared<const IndicatorLinearData>(
        IndicatorLinearData{std::move(region), std::move(slope)});
    return f;
}

ConvexFunction ConvexFunction::kink_sum(int dim, Vec xbar, std::vector<int> axes) {
    if (xbar.size() != dim) throw DimensionMismatch("kink_sum");
    std::set<int> uniq(axes.begin(), axes.end());
    for (int a : uniq)
        if (a < 0 || a >= dim) throw IndexOutOfRange("kink_sum: axis out of range");
    ConvexFunction f;
    f.variant_ = Variant::KinkSum;
    f.dim_ = dim;
    f.kink_ = std::make_shared<const KinkSumData>(
        KinkSumData{std::move(xbar), std::vector<int>(uniq.begin(), uniq.end())});
    return f;
}

// --- accessors ---

#define HESSVAL_ACCESSOR(method, member, want)                                        \
    {                                                                                 \
        if (variant_ != Variant::want) throw UnsupportedVariant(#method);             \
        return *member;                                                               \
    }

const GridData& ConvexFunction::grid_data() const HESSVAL_ACCESSOR(grid_data, grid_, Grid)
const std::vector<PwaPiece>& ConvexFunction::pwa_pieces() const
    HESSVAL_ACCESSOR(pwa_pieces, pieces_, PiecewiseAffine)
const QuadraticData& ConvexFunction::quadratic_data() const
    HESSVAL_ACCESSOR(quadratic_data, quad_, Quadratic)
const RadialProfileData& ConvexFunction::profile_data() const
    HESSVAL_ACCESSOR(profile_data, profile_, RadialProfile)
const IndicatorLinearData& ConvexFunction::indicator_data() const
    HESSVAL_ACCESSOR(indicator_data, indicator_, IndicatorLinear)
const KinkSumData& ConvexFunction::kink_data() const HESSVAL_ACCESSOR(kink_data, kink_, KinkSum)

#undef HESSVAL_ACCESSOR

const RadialConeData& ConvexFunction::cone_data() const {
    if (variant_ != Variant::RadialConeU && variant_ != Variant::RadialConeV)
        throw UnsupportedVariant("cone_data");
    return *cone_;
}

// --- evaluation ---

double ConvexFunction::evaluate(const Vec& x) const {
    if (x.size() != dim_) throw DimensionMismatch("evaluate");
    switch (variant_) {
        case Variant::Grid:
            return grid_->interpolate(x);
        case Variant::PiecewiseAffine: {
            double best = kInf;
            bool inside = false;
            for (const PwaPiece& p : *pieces_) {
                if (p.region.contains(x)) {
                    double v = p.slope.dot(x) + p.offset;
                    best = inside ? std::max(best, v) : v;
                    inside = true;
                }
            }
            return inside ? best : kInf;
        }
        case Variant::Quadratic:
            return 0.5 * x.dot(quad_->Q * x) + quad_->b.dot(x) + quad_->c;
        case Variant::RadialConeU: {
            double r = x.norm();
            return r <= cone_->ball_radius + 1e-12 ? cone_->t * r : kInf;
        }
        case Variant::RadialConeV: {
            double r = x.norm();
            return cone_->scale * std::max(r - cone_->t, 0.0);
        }
        case Variant::RadialProfile: {
            double r = x.norm();
            return r <= profile_->r_max + 1e-12 ? profile_->value(std::min(r, profile_->r_max))
                                                : kInf;
        }
        case Variant::IndicatorLinear:
            return indicator_->region.contains(x) ? indicator_->slope.dot(x) : kInf;
        case Variant::KinkSum: {
            double s = 0.0;
            for (int a : kink_->axes) s += 0.5 * std::abs(x[a] - kink_->xbar[a]);
            return s;
        }
    }
    return kInf;
}

namespace {

// Snap to the nearest grid node and check the finite stencil there.
std::vector<int> grid_node_near(const GridData& g, const Vec& x) {
    std::vector<int> idx(g.dim());
    for (int a = 0; a < g.dim(); ++a) {
        double t = (x[a] - g.lo[a]) / g.spacing(a);
        int i = static_cast<int>(std::lround(t));
        if (i < 0 || i >= g.shape[a]) throw NotDifferentiable("grid point outside box");
        idx[a] = i;
    }
    return idx;
}

double grid_value_checked(const GridData& g, std::vector<int> idx, int a, int da, int b = -1,
                          int db = 0) {
    idx[a] += da;
    if (b >= 0) idx[b] += db;
    for (int k = 0; k < g.dim(); ++k)
        if (idx[k] < 0 || idx[k] >= g.shape[k])
            throw NotDifferentiable("stencil leaves the grid");
    double v = g.at(idx);
    if (!std::isfinite(v)) throw NotDifferentiable("stencil touches an infinite cell");
    return v;
}

}  // namespace

Vec ConvexFunction::gradient(const Vec& x) const {
    if (x.size() != dim_) throw DimensionMismatch("gradient");
    const int n = dim_;
    switch (variant_) {
        case Variant::Quadratic:
            return quad_->Q * x + quad_->b;
        case Variant::Grid: {
            const GridData& g = *grid_;
            auto idx = grid_node_near(g, x);
            grid_value_checked(g, idx, 0, 0);  // the node itself must be finite
            Vec grad(n);
            for (int a = 0; a < n; ++a) {
                double fp = grid_value_checked(g, idx, a, +1);
                double fm = grid_value_checked(g, idx, a, -1);
                grad[a] = (fp - fm) / (2.0 * g.spacing(a));
            }
            return grad;
        }
        case Variant::RadialConeU: {
            double r = x.norm();
            if (r < 1e-12 || r > cone_->ball_radius - 1e-12)
                throw NotDifferentiable("radial cone u: apex or ball boundary");
            return Vec(cone_->t / r * x);
        }
        case Variant::RadialConeV: {
            double r = x.norm();
            if (std::abs(r - cone_->t) < 1e-12)
                throw NotDifferentiable("radial cone v: kink sphere");
            if (r < cone_->t) return Vec::Zero(n);
            return Vec(cone_->scale / r * x);
        }
        case Variant::RadialProfile: {
            double r = x.norm();
            if (r > profile_->r_max + 1e-12) throw NotDifferentiable("outside profile ball");
            if (r < 1e-12) {
                double d0 = profile_->deriv(0.0);
                if (std::abs(d0) > 1e-8) throw NotDifferentiable("profile kink at origin");
                return Vec::Zero(n);
            }
            return Vec(profile_->deriv(r) / r * x);
        }
        case Variant::PiecewiseAffine: {
            const PwaPiece* inside = nullptr;
            for (const PwaPiece& p : *pieces_) {
                if (!p.region.contains(x)) continue;
                if (inside && (inside->slope - p.slope).norm() > 1e-12)
                    throw NotDifferentiable("piecewise affine: breakpoint");
                inside = &p;
            }
            if (!inside) throw NotDifferentiable("outside domain");
            return inside->slope;
        }
        case Variant::IndicatorLinear:
            if (!indicator_->region.contains(x)) throw NotDifferentiable("outside domain");
            return indicator_->slope;
        case Variant::KinkSum: {
            Vec grad = Vec::Zero(n);
            for (int a : kink_->axes) {
                double d = x[a] - kink_->xbar[a];
                if (std::abs(d) < 1e-12) throw NotDifferentiable("kink hyperplane");
                grad[a] = d > 0 ? 0.5 : -0.5;
            }
            return grad;
        }
    }
    throw UnsupportedVariant("gradient");
}

Mat ConvexFunction::hessian(const Vec& x) const {
    if (x.size() != dim_) throw DimensionMismatch("hessian");
    const int n = dim_;
    switch (variant_) {
        case Variant::Quadratic:
            return quad_->Q;
        case Variant::Grid: {
            const GridData& g = *grid_;
            auto idx = grid_node_near(g, x);
            Mat H(n, n);
            double f0 = grid_value_checked(g, idx, 0, 0);
            for (int a = 0; a < n; ++a) {
                double ha = g.spacing(a);
                H(a, a) = (grid_value_checked(g, idx, a, +1) - 2.0 * f0 +
                           grid_value_checked(g, idx, a, -1)) /
                          (ha * ha);
                for (int b = a + 1; b < n; ++b) {
                    double hb = g.spacing(b);
                    double v = (grid_value_checked(g, idx, a, +1, b, +1) -
                                grid_value_checked(g, idx, a, +1, b, -1) -
                                grid_value_checked(g, idx, a, -1, b, +1) +
                                grid_value_checked(g, idx, a, -1, b, -1)) /
                               (4.0 * ha * hb);
                    H(a, b) = H(b, a) = v;
                }
            }
            return H;
        }
        case Variant::RadialConeU: {
            double r = x.norm();
            if (r < 1e-12 || r > cone_->ball_radius - 1e-12)
                throw NotDifferentiable("radial cone u: apex or ball boundary");
            Vec u = x / r;
            return cone_->t / r * (Mat::Identity(n, n) - u * u.transpose());
        }
        case Variant::RadialConeV: {
            double r = x.norm();
            if (std::abs(r - cone_->t) < 1e-12)
                throw NotDifferentiable("radial cone v: kink sphere");
            if (r < cone_->t) return Mat::Zero(n, n);
            Vec u = x / r;
            return cone_->scale / r * (Mat::Identity(n, n) - u * u.transpose());
        }
        case Variant::RadialProfile: {
            double r = x.norm();
            if (r > profile_->r_max + 1e-12) throw NotDifferentiable("outside profile ball");
            if (r < 1e-12) return profile_->deriv2(0.0) * Mat::Identity(n, n);
            Vec u = x / r;
            Mat P = u * u.transpose();
            return profile_->deriv2(r) * P + profile_->deriv(r) / r * (Mat::Identity(n, n) - P);
        }
        case Variant::PiecewiseAffine:
        case Variant::IndicatorLinear:
            gradient(x);  // reuse the differentiability checks
            return Mat::Zero(n, n);
        case Variant::KinkSum:
            gradient(x);
            return Mat::Zero(n, n);
    }
    throw UnsupportedVariant("hessian");
}

// --- sampling ---

GridData sample_to_grid(const ConvexFunction& f, const Vec& lo, const Vec& hi,
                        const std::vector<int>& shape) {
    GridData g = GridData::make(lo, hi, shape);
    g.for_each([&](const std::vector<int>& idx, std::size_t k) {
        g.values[k] = f.evaluate(g.node(idx));
        (void)idx;
    });
    return g;
}

// --- convexity ---

double convexity_tolerance(double value_scale) { return 1e-9 + 1e-6 * value_scale; }

namespace {

double grid_convexity_gap(const GridData& g) {
    const int n = g.dim();
    const double tol = 0.0;  // raw gap; caller compares against tolerance
    (void)tol;
    // Direction set: axis steps and all diagonals with entries in {-1,0,1},
    // normalized so the first nonzero entry is positive.
    std::vector<std::vector<int>> dirs;
    std::vector<int> d(n, -1);
    while (true) {
        bool nonzero = false, first_pos = false;
        for (int a = 0; a < n; ++a) {
            if (d[a] != 0) {
                first_pos = d[a] > 0;
                nonzero = true;
                break;
            }
        }
        if (nonzero && first_pos) dirs.push_back(d);
        int a = n - 1;
        for (; a >= 0; --a) {
            if (++d[a] <= 1) break;
            d[a] = -1;
        }
        if (a < 0) break;
    }

    double gap = 0.0;
    g.for_each([&](const std::vector<int>& idx, std::size_t) {
        for (const auto& dir : dirs) {
            std::vector<int> ip = idx, im = idx;
            bool ok = true;
            for (int a = 0; a < n; ++a) {
                ip[a] += dir[a];
                im[a] -= dir[a];
                if (ip[a] < 0 || ip[a] >= g.shape[a] || im[a] < 0 || im[a] >= g.shape[a])
                    ok = false;
            }
            if (!ok) continue;
            double mid = g.at(idx);
            double avg = 0.5 * (g.at(ip) + g.at(im));
            if (!std::isfinite(avg)) continue;  // no constraint from infinite ends
            if (!std::isfinite(mid)) {
                gap = kInf;  // domain fails to be convex along this segment
                continue;
            }
            gap = std::max(gap, mid - avg);
        }
    });
    return gap;
}

double pwa_convexity_gap(const std::vector<PwaPiece>& pieces) {
    double gap = 0.0;
    for (const PwaPiece& pi : pieces) {
        for (const Vec& v : pi.region.vertices()) {
            double active = pi.slope.dot(v) + pi.offset;
            for (const PwaPiece& pj : pieces)
                gap = std::max(gap, pj.slope.dot(v) + pj.offset - active);
        }
    }
    return gap;
}

}  // namespace

double convexity_gap(const ConvexFunction& f) {
    switch (f.variant()) {
        case Variant::Grid:
            return grid_convexity_gap(f.grid_data());
        case Variant::PiecewiseAffine:
            return pwa_convexity_gap(f.pwa_pieces());
        case Variant::Quadratic: {
            Eigen::SelfAdjointEigenSolver<Mat> es(f.quadratic_data().Q, Eigen::EigenvaluesOnly);
            return std::max(0.0, -es.eigenvalues().minCoeff());
        }
        default:
            return 0.0;  // remaining families are convex by construction
    }
}

bool is_convex(const ConvexFunction& f) {
    double scale = 1.0;
    if (f.variant() == Variant::Grid) scale = f.grid_data().max_abs_finite();
    if (f.variant() == Variant::Quadratic) scale = f.quadratic_data().Q.cwiseAbs().maxCoeff();
    return convexity_gap(f) <= convexity_tolerance(scale);
}

// --- epi-calculus ---

namespace {

// Effective sampling box for materializing a variant on a grid.
void effective_box(const ConvexFunction& f, Vec& lo, Vec& hi) {
    const int n = f.dim();
    switch (f.variant()) {
        case Variant::Grid:
            lo = f.grid_data().lo;
            hi = f.grid_data().hi;
            return;
        case Variant::RadialConeU: {
            double R = f.cone_data().ball_radius;
            lo = Vec::Constant(n, -R);
            hi = Vec::Constant(n, R);
            return;
        }
        case Variant::RadialProfile: {
            double R = f.profile_data().r_max;
            if (!std::isfinite(R))
                throw UnboundedDomain("effective_box: analytic profile on all of R^n");
            lo = Vec::Constant(n, -R);
            hi = Vec::Constant(n, R);
            return;
        }
        case Variant::IndicatorLinear:
            f.indicator_data().region.bounding_box(lo, hi);
            return;
        case Variant::PiecewiseAffine: {
            lo = Vec::Constant(n, kInf);
            hi = Vec::Constant(n, -kInf);
            for (const PwaPiece& p : f.pwa_pieces()) {
                Vec l, h;
                p.region.bounding_box(l, h);
                lo = lo.cwiseMin(l);
                hi = hi.cwiseMax(h);
            }
            return;
        }
        default:
            throw UnboundedDomain("effective_box: variant has unbounded domain; sample explicitly");
    }
}

GridData resample(const GridData& g, const Vec& lo, const Vec& hi, const std::vector<int>& shape) {
    GridData out = GridData::make(lo, hi, shape);
    out.for_each([&](const std::vector<int>& idx, std::size_t k) {
        out.values[k] = g.interpolate(out.node(idx));
    });
    return out;
}

}  // namespace

ConvexFunction inf_convolve(const ConvexFunction& u, const ConvexFunction& v) {
    const int n = u.dim();
    if (v.dim() != n) throw DimensionMismatch("inf_convolve");

    // Indicator of a single point is the identity element up to a shift.
    if (v.variant() == Variant::IndicatorLinear && v.indicator_data().region.affine_dim() == 0) {
        const auto& d = v.indicator_data();
        const Vec q = d.region.vertices().front();
        Vec lo, hi;
        effective_box(u, lo, hi);
        std::vector<int> shape(n, 65);
        GridData out = GridData::make(Vec(lo + q), Vec(hi + q), shape);
        out.for_each([&](const std::vector<int>& idx, std::size_t k) {
            Vec x = out.node(idx);
            double base = u.evaluate(Vec(x - q));
            out.values[k] = std::isfinite(base) ? base + d.slope.dot(q) : kInf;
        });
        return ConvexFunction::grid(std::move(out));
    }
    if (u.variant() == Variant::IndicatorLinear && u.indicator_data().region.affine_dim() == 0)
        return inf_convolve(v, u);

    if (n > 2)
        throw UnsupportedVariant(
            "inf_convolve: n > 2 is only supported through moreau_yosida (separable quadratic)");

    Vec lo_u(n), hi_u(n), lo_v(n), hi_v(n);
    effective_box(u, lo_u, hi_u);
    effective_box(v, lo_v, hi_v);
    std::vector<int> shape_u(n), shape_v(n);
    const int kNodes = 65;
    for (int a = 0; a < n; ++a) shape_u[a] = shape_v[a] = kNodes;
    GridData gu = u.variant() == Variant::Grid ? u.grid_data()
                                               : sample_to_grid(u, lo_u, hi_u, shape_u);
    GridData gv = v.variant() == Variant::Grid ? v.grid_data()
                                               : sample_to_grid(v, lo_v, hi_v, shape_v);

    // Equal spacing per axis is required for the exact index epi-sum.
    for (int a = 0; a < n; ++a) {
        if (std::abs(gu.spacing(a) - gv.spacing(a)) > 1e-12 * (1.0 + gu.spacing(a))) {
            std::vector<int> shape(n);
            for (int k = 0; k < n; ++k) {
                double len = gv.hi[k] - gv.lo[k];
                shape[k] = std::max(2, static_cast<int>(std::round(len / gu.spacing(k))) + 1);
            }
            Vec hi_adj(n);
            for (int k = 0; k < n; ++k) hi_adj[k] = gv.lo[k] + (shape[k] - 1) * gu.spacing(k);
            gv = resample(gv, gv.lo, hi_adj, shape);
            break;
        }
    }

    bool u_finite = false, v_finite = false;
    for (double w : gu.values) u_finite |= std::isfinite(w);
    for (double w : gv.values) v_finite |= std::isfinite(w);
    if (!u_finite || !v_finite) throw EmptyDomain("inf_convolve: empty effective domain");

    std::vector<int> shape_w(n);
    for (int a = 0; a < n; ++a) shape_w[a] = gu.shape[a] + gv.shape[a] - 1;
    GridData w = GridData::make(Vec(gu.lo + gv.lo), Vec(gu.hi + gv.hi), shape_w);

    // Exact min-plus convolution of the sample sets: O(N^2) by design.
    w.for_each([&](const std::vector<int>& kidx, std::size_t k) {
        double best = kInf;
        std::vector<int> i(n, 0), j(n);
        while (true) {
            bool valid = true;
            for (int a = 0; a < n; ++a) {
                j[a] = kidx[a] - i[a];
                if (j[a] < 0 || j[a] >= gv.shape[a]) valid = false;
            }
            if (valid) {
                double s = gu.at(i) + gv.at(j);
                best = std::min(best, s);
            }
            int a = n - 1;
            for (; a >= 0; --a) {
                if (++i[a] < gu.shape[a]) break;
                i[a] = 0;
            }
            if (a < 0) break;
        }
        if (best == -kInf) throw UnboundedResult("inf_convolve: infimum is -inf");
        w.values[k] = best;
    });
    return ConvexFunction::grid(std::move(w));
}

ConvexFunction epi_multiply(const ConvexFunction& u, double lambda) {
    if (lambda <= 0.0) throw NonpositiveScale("epi_multiply: lambda must be > 0");
    const int n = u.dim();
    switch (u.variant()) {
        case Variant::Grid: {
            const GridData& g = u.grid_data();
            GridData out = g;
            out.lo = lambda * g.lo;
            out.hi = lambda * g.hi;
            for (double& v : out.values) v = std::isfinite(v) ? lambda * v : kInf;
            return ConvexFunction::grid(std::move(out));
        }
        case Variant::Quadratic: {
            const QuadraticData& q = u.quadratic_data();
            return ConvexFunction::quadratic(Mat(q.Q / lambda), q.b, lambda * q.c);
        }
        case Variant::RadialConeU: {
            const RadialConeData& c = u.cone_data();
            return ConvexFunction::radial_cone_u(n, c.t, lambda * c.ball_radius);
        }
        case Variant::RadialConeV: {
            const RadialConeData& c = u.cone_data();
            return ConvexFunction::radial_cone_v(n, lambda * c.t, c.scale);
        }
        case Variant::RadialProfile: {
            const auto d = u.profile_data();  // copy for capture
            if (d.analytic()) {
                return ConvexFunction::radial_profile(
                    n, lambda * d.r_max, [d, lambda](double r) { return lambda * d.phi(r / lambda); },
                    [d, lambda](double r) { return d.dphi(r / lambda); },
                    [d, lambda](double r) { return d.ddphi(r / lambda) / lambda; });
            }
            std::vector<double> s = d.samples;
            for (double& v : s) v *= lambda;
            return ConvexFunction::radial_profile(n, lambda * d.r_max, std::move(s));
        }
        case Variant::PiecewiseAffine: {
            std::vector<PwaPiece> out;
            for (const PwaPiece& p : u.pwa_pieces())
                out.push_back({p.slope, lambda * p.offset, p.region.scaled(lambda)});
            return ConvexFunction::piecewise_affine(n, std::move(out));
        }
        case Variant::IndicatorLinear: {
            const IndicatorLinearData& d = u.indicator_data();
            return ConvexFunction::indicator_linear(d.region.scaled(lambda), d.slope);
        }
        case Variant::KinkSum: {
            const KinkSumData& d = u.kink_data();
            return ConvexFunction::kink_sum(n, Vec(lambda * d.xbar), d.axes);
        }
    }
    throw UnsupportedVariant("epi_multiply");
}

namespace {

struct Interval1d {
    double a, b;
    double slope, offset;
};

std::vector<Interval1d> pwa_to_intervals(const ConvexFunction& f) {
    std::vector<Interval1d> out;
    for (const PwaPiece& p : f.pwa_pieces()) {
        Vec lo, hi;
        p.region.bounding_box(lo, hi);
        out.push_back({lo[0], hi[0], p.slope[0], p.offset});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.a < y.a; });
    return out;
}

const Interval1d* find_piece(const std::vector<Interval1d>& ps, double x) {
    for (const auto& p : ps)
        if (x >= p.a - 1e-12 && x <= p.b + 1e-12) return &p;
    return nullptr;
}

ConvexFunction pwa_lattice_1d(const ConvexFunction& u, const ConvexFunction& v, bool take_max) {
    auto pu = pwa_to_intervals(u);
    auto pv = pwa_to_intervals(v);
    std::set<double> cuts;
    for (const auto& p : pu) {
        cuts.insert(p.a);
        cuts.insert(p.b);
    }
    for (const auto& p : pv) {
        cuts.insert(p.a);
        cuts.insert(p.b);
    }
    for (const auto& a : pu) {
        for (const auto& b : pv) {
            double lo = std::max(a.a, b.a), hi = std::min(a.b, b.b);
            if (hi <= lo) continue;
            double ds = a.slope - b.slope;
            if (std::abs(ds) < 1e-14) continue;
            double x = (b.offset - a.offset) / ds;
            if (x > lo + 1e-12 && x < hi - 1e-12) cuts.insert(x);
        }
    }
    std::vector<double> xs(cuts.begin(), cuts.end());
    std::vector<PwaPiece> pieces;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        double lo = xs[i], hi = xs[i + 1], mid = 0.5 * (lo + hi);
        const Interval1d* a = find_piece(pu, mid);
        const Interval1d* b = find_piece(pv, mid);
        const Interval1d* chosen = nullptr;
        if (take_max) {
            if (!a || !b) continue;  // max with +inf is +inf: outside the domain
            chosen = (a->slope * mid + a->offset >= b->slope * mid + b->offset) ? a : b;
        } else {
            if (!a && !b) continue;
            if (!a)
                chosen = b;
            else if (!b)
                chosen = a;
            else
                chosen = (a->slope * mid + a->offset <= b->slope * mid + b->offset) ? a : b;
        }
        Vec s(1);
        s << chosen->slope;
        pieces.push_back({s, chosen->offset, Polytope::interval(lo, hi)});
    }
    if (pieces.empty()) throw EmptyDomain("pointwise lattice op: empty domain");
    ConvexFunction out = ConvexFunction::piecewise_affine(1, std::move(pieces));
    return out;
}

}  // namespace

namespace {

// 2-D refinement: intersect piece pairs and split along the dominance line.
ConvexFunction pwa_max_2d(const ConvexFunction& u, const ConvexFunction& v) {
    std::vector<PwaPiece> out;
    for (const PwaPiece& pu : u.pwa_pieces()) {
        for (const PwaPiece& pv : v.pwa_pieces()) {
            Polytope cell = pu.region;
            bool empty = false;
            try {
                for (const HalfSpace& h : pv.region.halfspaces()) cell = cell.clipped_2d(h);
            } catch (const EmptyDomain&) {
                empty = true;
            }
            if (empty || cell.affine_dim() < 2) continue;
            // u >= v on the side a_u . x + o_u >= a_v . x + o_v
            Vec d = pu.slope - pv.slope;
            double c = pv.offset - pu.offset;
            if (d.norm() < 1e-14) {
                if (pu.offset >= pv.offset)
                    out.push_back({pu.slope, pu.offset, cell});
                else
                    out.push_back({pv.slope, pv.offset, cell});
                continue;
            }
            try {
                Polytope u_side = cell.clipped_2d({Vec(-d), -c});  // d.x >= c
                if (u_side.affine_dim() == 2) out.push_back({pu.slope, pu.offset, u_side});
            } catch (const EmptyDomain&) {
            }
            try {
                Polytope v_side = cell.clipped_2d({d, c});  // d.x <= c
                if (v_side.affine_dim() == 2) out.push_back({pv.slope, pv.offset, v_side});
            } catch (const EmptyDomain&) {
            }
        }
    }
    if (out.empty()) throw EmptyDomain("pointwise_max: domains do not overlap");
    return ConvexFunction::piecewise_affine(2, std::move(out));
}

}  // namespace

ConvexFunction pointwise_max(const ConvexFunction& u, const ConvexFunction& v) {
    if (u.dim() != v.dim()) throw DimensionMismatch("pointwise_max");
    if (u.dim() == 1 && u.variant() == Variant::PiecewiseAffine &&
        v.variant() == Variant::PiecewiseAffine)
        return pwa_lattice_1d(u, v, true);
    if (u.dim() == 2 && u.variant() == Variant::PiecewiseAffine &&
        v.variant() == Variant::PiecewiseAffine)
        return pwa_max_2d(u, v);

    Vec lo_u, hi_u, lo_v, hi_v;
    effective_box(u, lo_u, hi_u);
    effective_box(v, lo_v, hi_v);
    Vec lo = lo_u.cwiseMin(lo_v), hi = hi_u.cwiseMax(hi_v);
    std::vector<int> shape(u.dim(), 129);
    GridData out = GridData::make(lo, hi, shape);
    out.for_each([&](const std::vector<int>& idx, std::size_t k) {
        Vec x = out.node(idx);
        out.values[k] = std::max(u.evaluate(x), v.evaluate(x));
    });
    return ConvexFunction::grid(std::move(out));
}

ConvexFunction pointwise_min(const ConvexFunction& u, const ConvexFunction& v) {
    if (u.dim() != v.dim()) throw DimensionMismatch("pointwise_min");
    ConvexFunction result = [&] {
        if (u.dim() == 1 && u.variant() == Variant::PiecewiseAffine &&
            v.variant() == Variant::PiecewiseAffine)
            return pwa_lattice_1d(u, v, false);
        Vec lo_u, hi_u, lo_v, hi_v;
        effective_box(u, lo_u, hi_u);
        effective_box(v, lo_v, hi_v);
        Vec lo = lo_u.cwiseMin(lo_v), hi = hi_u.cwiseMax(hi_v);
        std::vector<int> shape(u.dim(), 129);
        GridData out = GridData::make(lo, hi, shape);
        out.for_each([&](const std::vector<int>& idx, std::size_t k) {
            Vec x = out.node(idx);
            out.values[k] = std::min(u.evaluate(x), v.evaluate(x));
        });
        return ConvexFunction::grid(std::move(out));
    }();
    if (!is_convex(result))
        throw NonConvexMin("pointwise_min: result fails the convexity check");
    return result;
}

}  // namespace hessval
