#include "hessval/transforms.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hessval {

// --- 1-D discrete conjugate ---

void conjugate_line(const std::vector<double>& x, const std::vector<double>& f,
                    const std::vector<double>& y, std::vector<double>& out) {
    const int n = static_cast<int>(x.size());
    // Lower convex hull of the finite sample points (x_i, f_i).
    std::vector<int> hull;
    hull.reserve(n);
    auto keeps_convex = [&](int a, int b, int c) {
        // slope(a,b) < slope(b,c) <=> (f_b-f_a)(x_c-x_b) < (f_c-f_b)(x_b-x_a)
        return (f[b] - f[a]) * (x[c] - x[b]) < (f[c] - f[b]) * (x[b] - x[a]);
    };
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(f[i])) continue;
        while (hull.size() >= 2 && !keeps_convex(hull[hull.size() - 2], hull.back(), i))
            hull.pop_back();
        hull.push_back(i);
    }
    out.assign(y.size(), -kInf);
    if (hull.empty()) return;
    std::size_t k = 0;
    for (std::size_t j = 0; j < y.size(); ++j) {
        while (k + 1 < hull.size() &&
               f[hull[k + 1]] - f[hull[k]] <= y[j] * (x[hull[k + 1]] - x[hull[k]]))
            ++k;
        out[j] = y[j] * x[hull[k]] - f[hull[k]];
    }
}

namespace {

std::vector<double> axis_coords(const Vec& lo, const Vec& hi, const std::vector<int>& shape,
                                int axis) {
    std::vector<double> c(shape[axis]);
    double h = (hi[axis] - lo[axis]) / (shape[axis] - 1);
    for (int i = 0; i < shape[axis]; ++i) c[i] = lo[axis] + i * h;
    return c;
}

// Legendre transform of grid samples: per-axis conjugates, innermost axis
// first, with a sign flip between passes.
GridData legendre_grid(const GridData& g, const Vec& dlo, const Vec& dhi,
                       const std::vector<int>& dshape) {
    const int n = g.dim();
    std::vector<int> shape = g.shape;
    std::vector<double> work = g.values;

    for (int axis = n - 1; axis >= 0; --axis) {
        std::vector<double> xs = axis_coords(g.lo, g.hi, g.shape, axis);
        std::vector<double> ys = axis_coords(dlo, dhi, dshape, axis);
        std::vector<int> out_shape = shape;
        out_shape[axis] = dshape[axis];

        std::size_t inner = 1, outer = 1;
        for (int a = axis + 1; a < n; ++a) inner *= shape[a];
        for (int a = 0; a < axis; ++a) outer *= shape[a];
        std::size_t len = shape[axis], out_len = dshape[axis];

        std::vector<double> next(outer * out_len * inner);
        std::vector<double> line(len), conj(out_len);
        for (std::size_t o = 0; o < outer; ++o) {
            for (std::size_t i = 0; i < inner; ++i) {
                for (std::size_t l = 0; l < len; ++l)
                    line[l] = work[(o * len + l) * inner + i];
                conjugate_line(xs, line, ys, conj);
                for (std::size_t l = 0; l < out_len; ++l)
                    next[(o * out_len + l) * inner + i] = conj[l];
            }
        }
        work.swap(next);
        shape = out_shape;
        if (axis > 0)
            for (double& v : work) v = -v;  // inner pass feeds the next as -conjugate
    }

    GridData out = GridData::make(dlo, dhi, dshape);
    bool any_finite = false;
    for (std::size_t k = 0; k < work.size(); ++k) {
        out.values[k] = work[k] == -kInf ? kInf : work[k];
        any_finite |= std::isfinite(out.values[k]);
    }
    if (!any_finite) throw EmptyDomain("legendre: empty domain");
    return out;
}

double max_slope_norm(const ConvexFunction& f) {
    switch (f.variant()) {
        case Variant::Grid: {
            const GridData& g = f.grid_data();
            double m = 0.0;
            g.for_each([&](const std::vector<int>& idx, std::size_t k) {
                double v = g.values[k];
                if (!std::isfinite(v)) return;
                for (int a = 0; a < g.dim(); ++a) {
                    if (idx[a] + 1 >= g.shape[a]) continue;
                    std::vector<int> jp = idx;
                    jp[a] += 1;
                    double w = g.at(jp);
                    if (std::isfinite(w)) m = std::max(m, std::abs(w - v) / g.spacing(a));
                }
            });
            return m;
        }
        case Variant::RadialConeU:
            return f.cone_data().t;
        case Variant::RadialConeV:
            return f.cone_data().scale;
        case Variant::RadialProfile: {
            const auto& p = f.profile_data();
            if (!std::isfinite(p.r_max)) throw UnboundedDomain("max_slope_norm");
            return std::abs(p.deriv(p.r_max));
        }
        case Variant::PiecewiseAffine: {
            double m = 0.0;
            for (const PwaPiece& p : f.pwa_pieces()) m = std::max(m, p.slope.norm());
            return m;
        }
        case Variant::IndicatorLinear:
            return f.indicator_data().slope.norm();
        default:
            throw UnboundedDomain("max_slope_norm: unbounded slope range");
    }
}

}  // namespace

void default_dual_box(const ConvexFunction& f, Vec& lo, Vec& hi) {
    const int n = f.dim();
    if (f.variant() == Variant::Grid) {
        const GridData& g = f.grid_data();
        lo = Vec(n);
        hi = Vec(n);
        for (int a = 0; a < n; ++a) {
            double smin = kInf, smax = -kInf;
            g.for_each([&](const std::vector<int>& idx, std::size_t k) {
                double v = g.values[k];
                if (!std::isfinite(v) || idx[a] + 1 >= g.shape[a]) return;
                std::vector<int> jp = idx;
                jp[a] += 1;
                double w = g.at(jp);
                if (!std::isfinite(w)) return;
                double s = (w - v) / g.spacing(a);
                smin = std::min(smin, s);
                smax = std::max(smax, s);
            });
            if (smin > smax) {  // domain is a single node along this axis
                smin = -1.0;
                smax = 1.0;
            }
            double pad = 0.05 * (smax - smin) + g.spacing(a);
            lo[a] = smin - pad;
            hi[a] = smax + pad;
        }
        return;
    }
    // All slopes of the remaining bounded-domain variants lie in a ball.
    double R = max_slope_norm(f) * 1.1 + 0.5;
    if (f.variant() == Variant::IndicatorLinear) {
        // conjugate is the support function shifted by the slope: any box works
        Vec y0 = f.indicator_data().slope;
        lo = Vec::Constant(n, -R - 2.0) + y0;
        hi = Vec::Constant(n, R + 2.0) + y0;
        return;
    }
    lo = Vec::Constant(n, -R);
    hi = Vec::Constant(n, R);
}

ConvexFunction legendre(const ConvexFunction& f, const Vec& dual_lo, const Vec& dual_hi,
                        const std::vector<int>& dual_shape) {
    switch (f.variant()) {
        case Variant::Grid:
            return ConvexFunction::grid(legendre_grid(f.grid_data(), dual_lo, dual_hi, dual_shape));
        case Variant::PiecewiseAffine: {
            // Exact: the sup over each affine piece is attained at a vertex.
            GridData out = GridData::make(dual_lo, dual_hi, dual_shape);
            const auto& pieces = f.pwa_pieces();
            out.for_each([&](const std::vector<int>& idx, std::size_t k) {
                Vec y = out.node(idx);
                double best = -kInf;
                for (const PwaPiece& p : pieces)
                    for (const Vec& v : p.region.vertices())
                        best = std::max(best, y.dot(v) - (p.slope.dot(v) + p.offset));
                out.values[k] = best;
            });
            return ConvexFunction::grid(std::move(out));
        }
        case Variant::IndicatorLinear: {
            const auto& d = f.indicator_data();
            GridData out = GridData::make(dual_lo, dual_hi, dual_shape);
            out.for_each([&](const std::vector<int>& idx, std::size_t k) {
                Vec y = out.node(idx);
                out.values[k] = d.region.support(Vec(y - d.slope));
            });
            return ConvexFunction::grid(std::move(out));
        }
        default: {
            if (auto conj = conjugate_exact(f))
                return ConvexFunction::grid(
                    sample_to_grid(*conj, dual_lo, dual_hi, dual_shape));
            // Remaining case: bounded radial profile.  Sample and conjugate
            // the grid.
            if (f.variant() != Variant::RadialProfile || !std::isfinite(f.profile_data().r_max))
                throw UnsupportedVariant("legendre: no conjugate route for this variant");
            double R = f.profile_data().r_max;
            std::vector<int> shape(f.dim(), 129);
            GridData g = sample_to_grid(f, Vec::Constant(f.dim(), -R),
                                        Vec::Constant(f.dim(), R), shape);
            return ConvexFunction::grid(legendre_grid(g, dual_lo, dual_hi, dual_shape));
        }
    }
}

ConvexFunction legendre(const ConvexFunction& f) {
    Vec lo, hi;
    default_dual_box(f, lo, hi);
    std::vector<int> shape(f.dim(), 129);
    if (f.variant() == Variant::Grid) shape = f.grid_data().shape;
    return legendre(f, lo, hi, shape);
}

std::optional<ConvexFunction> conjugate_exact(const ConvexFunction& f) {
    const int n = f.dim();
    switch (f.variant()) {
        case Variant::Quadratic: {
            const QuadraticData& q = f.quadratic_data();
            if (q.Q.determinant() < 1e-12)
                throw SingularHessian("conjugate_exact: quadratic with singular Q");
            Mat Qi = q.Q.inverse();
            Vec bi = -Qi * q.b;
            double ci = 0.5 * q.b.dot(Qi * q.b) - q.c;
            return ConvexFunction::quadratic(Qi, bi, ci);
        }
        case Variant::RadialConeU: {
            const RadialConeData& c = f.cone_data();
            return ConvexFunction::radial_cone_v(n, c.t, c.ball_radius);
        }
        case Variant::RadialConeV: {
            const RadialConeData& c = f.cone_data();
            return ConvexFunction::radial_cone_u(n, c.t, c.scale);
        }
        case Variant::KinkSum: {
            const KinkSumData& d = f.kink_data();
            Vec lo = Vec::Zero(n), hi = Vec::Zero(n), slope = Vec::Zero(n);
            for (int a : d.axes) {
                lo[a] = -0.5;
                hi[a] = 0.5;
                slope[a] = d.xbar[a];
            }
            Polytope box = Polytope::embedded_box(n, d.axes, lo, hi);
            return ConvexFunction::indicator_linear(std::move(box), std::move(slope));
        }
        default:
            return std::nullopt;
    }
}

double biconjugate_check(const ConvexFunction& f) {
    if (f.variant() != Variant::Grid) {
        Vec lo, hi;
        std::vector<int> shape(f.dim(), 129);
        // sample on the effective box, then recurse
        default_dual_box(f, lo, hi);
        ConvexFunction fs = legendre(legendre(f));
        // compare on the grid of the double conjugate
        const GridData& g = fs.grid_data();
        double gap = 0.0;
        g.for_each([&](const std::vector<int>& idx, std::size_t k) {
            double orig = f.evaluate(g.node(idx));
            double back = g.values[k];
            if (std::isfinite(orig) && std::isfinite(back))
                gap = std::max(gap, std::abs(orig - back));
        });
        return gap;
    }
    const GridData& g = f.grid_data();
    // When the raw slope range fits inside the primal box, conjugating onto
    // the primal grid itself keeps the double transform exact at strictly
    // convex sample points (the maximizing slope is then a grid node).
    bool fits = true;
    for (int a = 0; a < g.dim(); ++a) {
        double smin = kInf, smax = -kInf;
        g.for_each([&](const std::vector<int>& idx, std::size_t k) {
            double v = g.values[k];
            if (!std::isfinite(v) || idx[a] + 1 >= g.shape[a]) return;
            std::vector<int> jp = idx;
            jp[a] += 1;
            double w = g.at(jp);
            if (!std::isfinite(w)) return;
            double s = (w - v) / g.spacing(a);
            smin = std::min(smin, s);
            smax = std::max(smax, s);
        });
        if (smin < g.lo[a] || smax > g.hi[a]) fits = false;
    }
    ConvexFunction conj = fits ? legendre(f, g.lo, g.hi, g.shape) : legendre(f);
    ConvexFunction back = legendre(conj, g.lo, g.hi, g.shape);
    const GridData& b = back.grid_data();
    double gap = 0.0;
    g.for_each([&](const std::vector<int>& idx, std::size_t k) {
        if (!std::isfinite(g.values[k])) return;
        double bb = b.values[k];
        if (std::isfinite(bb)) gap = std::max(gap, std::abs(g.values[k] - bb));
        (void)idx;
    });
    return gap;
}

// --- Moreau-Yosida ---

namespace {

// Lower envelope of the parabolas v[i] + (x - x_i)^2 / (2 lambda), queried
// at the (ascending) positions q.  Entries with v = +inf are skipped.
void parabola_envelope(const std::vector<double>& xs, const std::vector<double>& v, double lambda,
                       const std::vector<double>& q, std::vector<double>& out) {
    const int n = static_cast<int>(xs.size());
    std::vector<int> hull;
    std::vector<double> z;  // z[k] = left boundary of hull[k]'s active range
    hull.reserve(n);
    z.reserve(n + 1);
    auto crossing = [&](int i, int j) {
        // abscissa where parabola j overtakes parabola i (x_j > x_i)
        return ((v[j] + xs[j] * xs[j] / (2 * lambda)) - (v[i] + xs[i] * xs[i] / (2 * lambda))) /
               ((xs[j] - xs[i]) / lambda);
    };
    for (int i = 0; i < n; ++i) {
        if (!std::isfinite(v[i])) continue;
        if (hull.empty()) {
            hull.push_back(i);
            z.push_back(-kInf);
            continue;
        }
        double s = crossing(hull.back(), i);
        while (!hull.empty() && s <= z.back()) {
            hull.pop_back();
            z.pop_back();
            if (!hull.empty()) s = crossing(hull.back(), i);
        }
        hull.push_back(i);
        z.push_back(hull.size() == 1 ? -kInf : s);
    }
    out.assign(q.size(), kInf);
    if (hull.empty()) return;
    std::size_t k = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        while (k + 1 < hull.size() && z[k + 1] < q[j]) ++k;
        int i = hull[k];
        out[j] = v[i] + (q[j] - xs[i]) * (q[j] - xs[i]) / (2 * lambda);
    }
}

GridData moreau_grid(const GridData& g, double lambda) {
    const int n = g.dim();
    // Output box: input box expanded by lambda * (max slope) per axis.
    double pad = 0.0;
    {
        double m = 0.0;
        g.for_each([&](const std::vector<int>& idx, std::size_t k) {
            double v = g.values[k];
            if (!std::isfinite(v)) return;
            for (int a = 0; a < n; ++a) {
                if (idx[a] + 1 >= g.shape[a]) continue;
                std::vector<int> jp = idx;
                jp[a] += 1;
                double w = g.at(jp);
                if (std::isfinite(w)) m = std::max(m, std::abs(w - v) / g.spacing(a));
            }
        });
        pad = lambda * m;
    }

    Vec lo(n), hi(n);
    std::vector<int> shape(n);
    for (int a = 0; a < n; ++a) {
        double h = g.spacing(a);
        int extra = static_cast<int>(std::ceil(pad / h)) + 1;
        lo[a] = g.lo[a] - extra * h;
        hi[a] = g.hi[a] + extra * h;
        shape[a] = g.shape[a] + 2 * extra;
    }

    std::vector<int> cur_shape = g.shape;
    Vec cur_lo = g.lo;
    std::vector<double> work = g.values;

    for (int axis = 0; axis < n; ++axis) {
        std::vector<double> xs(cur_shape[axis]), qs(shape[axis]);
        double h = g.spacing(axis);
        for (int i = 0; i < cur_shape[axis]; ++i) xs[i] = cur_lo[axis] + i * h;
        for (int i = 0; i < shape[axis]; ++i) qs[i] = lo[axis] + i * h;

        std::size_t inner = 1, outer = 1;
        for (int a = axis + 1; a < n; ++a) inner *= cur_shape[a];
        for (int a = 0; a < axis; ++a) outer *= shape[a];  // processed axes use new shape
        std::size_t len = cur_shape[axis], out_len = shape[axis];

        std::vector<double> next(outer * out_len * inner);
        std::vector<double> line(len), env(out_len);
        for (std::size_t o = 0; o < outer; ++o)
            for (std::size_t i = 0; i < inner; ++i) {
                for (std::size_t l = 0; l < len; ++l) line[l] = work[(o * len + l) * inner + i];
                parabola_envelope(xs, line, lambda, qs, env);
                for (std::size_t l = 0; l < out_len; ++l)
                    next[(o * out_len + l) * inner + i] = env[l];
            }
        work.swap(next);
        cur_shape[axis] = shape[axis];
        cur_lo[axis] = lo[axis];
    }

    GridData out = GridData::make(lo, hi, shape);
    out.values = std::move(work);
    return out;
}

}  // namespace

ConvexFunction moreau_yosida(const ConvexFunction& u, double lambda) {
    if (lambda <= 0.0) throw NonpositiveScale("moreau_yosida: lambda must be > 0");
    const int n = u.dim();
    switch (u.variant()) {
        case Variant::Quadratic: {
            const QuadraticData& q = u.quadratic_data();
            Mat A = (Mat::Identity(n, n) + lambda * q.Q).inverse();
            Mat Qm = 0.5 * (A * q.Q + (A * q.Q).transpose());
            Vec bm = A * q.b;
            double cm = q.c - 0.5 * lambda * q.b.dot(A * q.b);
            return ConvexFunction::quadratic(Qm, bm, cm);
        }
        case Variant::Grid:
            return ConvexFunction::grid(moreau_grid(u.grid_data(), lambda));
        case Variant::RadialConeU: {
            const RadialConeData c = u.cone_data();
            double t = c.t, R = c.ball_radius;
            auto phi = [t, R, lambda](double r) {
                double q = std::clamp(r - lambda * t, 0.0, R);
                return t * q + (r - q) * (r - q) / (2 * lambda);
            };
            auto dphi = [t, R, lambda](double r) {
                double q = std::clamp(r - lambda * t, 0.0, R);
                return (r - q) / lambda;
            };
            auto ddphi = [t, R, lambda](double r) {
                double q = r - lambda * t;
                return (q <= 0.0 || q >= R) ? 1.0 / lambda : 0.0;
            };
            return ConvexFunction::radial_profile(n, kInf, phi, dphi, ddphi);
        }
        case Variant::RadialConeV: {
            const RadialConeData c = u.cone_data();
            double t = c.t, s = c.scale;
            auto phi = [t, s, lambda](double r) {
                if (r <= t) return 0.0;
                if (r <= t + lambda * s) return (r - t) * (r - t) / (2 * lambda);
                return s * (r - t) - lambda * s * s / 2;
            };
            auto dphi = [t, s, lambda](double r) {
                if (r <= t) return 0.0;
                if (r <= t + lambda * s) return (r - t) / lambda;
                return s;
            };
            auto ddphi = [t, s, lambda](double r) {
                return (r > t && r < t + lambda * s) ? 1.0 / lambda : 0.0;
            };
            return ConvexFunction::radial_profile(n, kInf, phi, dphi, ddphi);
        }
        case Variant::RadialProfile: {
            const RadialProfileData p = u.profile_data();
            if (!std::isfinite(p.r_max))
                throw UnsupportedVariant("moreau_yosida: unbounded analytic profile");
            // 1-D envelope on a fine sampling of the profile
            const int m = 2048;
            std::vector<double> xs(m), vs(m);
            for (int i = 0; i < m; ++i) {
                xs[i] = p.r_max * i / (m - 1);
                vs[i] = p.value(xs[i]);
            }
            double slope = std::abs(p.deriv(p.r_max));
            double r_out = p.r_max + lambda * slope + 1.0;
            const int mo = 2048;
            std::vector<double> qs(mo), env(mo);
            for (int i = 0; i < mo; ++i) qs[i] = r_out * i / (mo - 1);
            parabola_envelope(xs, vs, lambda, qs, env);
            return ConvexFunction::radial_profile(n, r_out, std::move(env));
        }
        case Variant::IndicatorLinear: {
            const IndicatorLinearData& d = u.indicator_data();
            if (d.region.affine_dim() == 0) {
                const Vec q = d.region.vertices().front();
                // min over the single point q
                Mat Q = Mat::Identity(n, n) / lambda;
                Vec b = -q / lambda;
                double c = q.squaredNorm() / (2 * lambda) + d.slope.dot(q);
                return ConvexFunction::quadratic(Q, b, c);
            }
            Vec lo, hi;
            d.region.bounding_box(lo, hi);
            Vec span = hi - lo;
            Vec glo = lo - 0.1 * span - Vec::Constant(n, 0.1);
            Vec ghi = hi + 0.1 * span + Vec::Constant(n, 0.1);
            std::vector<int> shape(n, 129);
            return ConvexFunction::grid(moreau_grid(sample_to_grid(u, glo, ghi, shape), lambda));
        }
        default:
            throw UnsupportedVariant("moreau_yosida: unsupported variant");
    }
}

// --- rotational epi-symmetrization ---

namespace {

double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

Mat quaternion_to_matrix(double w, double x, double y, double z) {
    Mat R(3, 3);
    R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
        2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
        2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return R;
}

std::vector<Mat> rotation_set(int n, int m) {
    std::vector<Mat> rots;
    if (n == 2) {
        for (int k = 0; k < m; ++k) {
            double a = 2.0 * M_PI * k / m;
            Mat R(2, 2);
            R << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
            rots.push_back(R);
        }
    } else if (n == 3) {
        // quasi-uniform quaternions from a Halton sequence
        for (int k = 1; k <= m; ++k) {
            double u1 = halton(k, 2), u2 = halton(k, 3), u3 = halton(k, 5);
            double q1 = std::sqrt(1 - u1) * std::sin(2 * M_PI * u2);
            double q2 = std::sqrt(1 - u1) * std::cos(2 * M_PI * u2);
            double q3 = std::sqrt(u1) * std::sin(2 * M_PI * u3);
            double q4 = std::sqrt(u1) * std::cos(2 * M_PI * u3);
            rots.push_back(quaternion_to_matrix(q1, q2, q3, q4));
        }
    } else {
        throw UnsupportedVariant("rotational_episymmetrize: n must be 2 or 3");
    }
    return rots;
}

}  // namespace

namespace {

// Support function of the effective domain in a given direction.
double domain_support(const ConvexFunction& u, const Vec& dir) {
    if (u.variant() == Variant::IndicatorLinear) return u.indicator_data().region.support(dir);
    if (u.variant() == Variant::Grid) {
        const GridData& g = u.grid_data();
        double best = -kInf;
        g.for_each([&](const std::vector<int>& idx, std::size_t k) {
            if (std::isfinite(g.values[k])) best = std::max(best, dir.dot(g.node(idx)));
        });
        return best;
    }
    if (u.variant() == Variant::RadialConeU) return u.cone_data().ball_radius;
    if (u.variant() == Variant::RadialProfile) {
        double R = u.profile_data().r_max;
        if (!std::isfinite(R)) throw UnboundedDomain("domain_support");
        return R;
    }
    if (u.variant() == Variant::PiecewiseAffine) {
        double best = -kInf;
        for (const PwaPiece& p : u.pwa_pieces()) best = std::max(best, p.region.support(dir));
        return best;
    }
    throw UnboundedDomain("domain_support: unbounded variant");
}

}  // namespace

ConvexFunction rotational_episymmetrize(const ConvexFunction& u, int rotations) {
    const int n = u.dim();
    if (n != 2 && n != 3) throw UnsupportedVariant("rotational_episymmetrize: n must be 2 or 3");
    double slope_radius = max_slope_norm(u) * 1.05 + 0.5;  // throws if unbounded

    // Conjugate on a rotation-closed ball inside a cube of half-width R.
    double R = slope_radius;
    Vec dlo = Vec::Constant(n, -R), dhi = Vec::Constant(n, R);
    std::vector<int> dshape(n, n == 2 ? 161 : 81);
    ConvexFunction conj = legendre(u, dlo, dhi, dshape);
    const GridData& cg = conj.grid_data();

    GridData avg = GridData::make(dlo, dhi, dshape);
    auto rots = rotation_set(n, rotations);
    avg.for_each([&](const std::vector<int>& idx, std::size_t k) {
        Vec y = avg.node(idx);
        if (y.norm() > R) {
            avg.values[k] = kInf;  // slopes outside the sampled ball
            return;
        }
        double acc = 0.0;
        for (const Mat& rot : rots) {
            double v = cg.interpolate(Vec(rot.transpose() * y));
            if (!std::isfinite(v)) {
                acc = kInf;
                break;
            }
            acc += v;
        }
        avg.values[k] = std::isfinite(acc) ? acc / rots.size() : kInf;
    });

    // Conjugate back onto a primal box covering the symmetrized body.
    Vec lo(n), hi(n);
    {
        Vec elo, ehi;
        if (u.variant() == Variant::Grid) {
            elo = u.grid_data().lo;
            ehi = u.grid_data().hi;
        } else {
            // probe for the domain radius
            GridData probe = sample_to_grid(u, Vec::Constant(n, -8.0), Vec::Constant(n, 8.0),
                                            std::vector<int>(n, 17));
            double r = 0.0;
            probe.for_each([&](const std::vector<int>& idx, std::size_t k) {
                if (std::isfinite(probe.values[k])) r = std::max(r, probe.node(idx).norm());
            });
            elo = Vec::Constant(n, -r - 1.0);
            ehi = Vec::Constant(n, r + 1.0);
        }
        double rad = std::max(elo.cwiseAbs().maxCoeff(), ehi.cwiseAbs().maxCoeff());
        rad *= std::sqrt(double(n));  // rotations may move corners onto the diagonal
        lo = Vec::Constant(n, -rad);
        hi = Vec::Constant(n, rad);
    }
    std::vector<int> pshape(n, n == 2 ? 161 : 81);
    ConvexFunction reconstructed = legendre(ConvexFunction::grid(std::move(avg)), lo, hi, pshape);

    // The sampled slope ball reproduces the function but leaves the domain
    // walls sloped; the domain of the symmetrization is the rotation mean of
    // the effective domain, so clamp to its sampled half-space intersection.
    auto sphere_dirs = sphere_rule(n, n == 2 ? 256 : 64);
    std::vector<std::pair<Vec, double>> walls;
    for (const auto& [dir, w] : sphere_dirs) {
        (void)w;
        double acc = 0.0;
        for (const Mat& rot : rots) acc += domain_support(u, Vec(rot.transpose() * dir));
        walls.emplace_back(dir, acc / rots.size());
    }
    GridData out = reconstructed.grid_data();
    double margin = 1e-9;
    for (int a = 0; a < n; ++a) margin = std::max(margin, out.spacing(a));
    out.for_each([&](const std::vector<int>& idx, std::size_t k) {
        Vec x = out.node(idx);
        for (const auto& [dir, h] : walls) {
            if (dir.dot(x) > h + margin) {
                out.values[k] = kInf;
                break;
            }
        }
    });
    return ConvexFunction::grid(std::move(out));
}

}  // namespace hessval
