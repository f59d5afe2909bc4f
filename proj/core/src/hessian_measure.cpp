#include "hessval/hessian_measure.hpp"

#include "hessval/constants.hpp"
#include "hessval/sym_matrix.hpp"
#include "hessval/transforms.hpp"

#include <algorithm>
#include <cmath>

namespace hessval {

namespace {

std::vector<double> profile_breaks(const ZetaProfile& z) {
    return z.analytic() ? std::vector<double>{} : z.abscissae();
}

}  // namespace

double HessianMeasure::integrate_radial(const ZetaProfile& zeta) const {
    const int n = dim;
    const double S = zeta.support_bound();
    double total = 0.0;

    if (const_density != 0.0)
        total += const_density * unit_sphere_measure(n) * zeta.weighted_tail(n - 1, 0.0);

    for (const PointAtom& a : atoms) total += a.weight * zeta(a.location.norm());
    for (const SphereAtom& a : spheres) total += a.mass * zeta(a.radius);

    for (const RadialDensityPart& p : radial_parts) {
        double hi = std::min(p.r_hi, S);
        if (hi <= p.r_lo) continue;
        auto f = [&](double r) { return std::pow(r, n - 1) * zeta(r) * p.density(r); };
        total += unit_sphere_measure(n) * integrate_1d_split(f, p.r_lo, hi, profile_breaks(zeta));
    }

    for (const BoxDensityPart& p : box_parts)
        total += box_quadrature([&](const Vec& x) { return zeta(x.norm()) * p.density(x); }, p.lo,
                                p.hi, 6);

    for (const SlabPart& p : slabs) {
        double t = 0.0;
        for (int a : p.atom_axes) t += p.atom_coords[a] * p.atom_coords[a];
        t = std::sqrt(t);
        const int m = n - static_cast<int>(p.atom_axes.size());
        if (m == 0) {
            total += p.weight * zeta(t);
        } else {
            // integral over the free coordinates in polar form
            if (t >= S) continue;
            double U = std::sqrt(S * S - t * t);
            auto f = [&](double r) {
                return zeta(std::sqrt(r * r + t * t)) * std::pow(r, m - 1);
            };
            total += p.weight * unit_sphere_measure(m) *
                     integrate_1d_split(f, 0.0, U, profile_breaks(zeta));
        }
    }
    return total;
}

namespace {

bool box_contains(const Vec& lo, const Vec& hi, const Vec& x, double tol = 1e-12) {
    for (int a = 0; a < x.size(); ++a)
        if (x[a] < lo[a] - tol || x[a] > hi[a] + tol) return false;
    return true;
}

}  // namespace

double HessianMeasure::measure_of_box(const Vec& lo, const Vec& hi) const {
    const int n = dim;
    double total = 0.0;
    double vol = 1.0;
    for (int a = 0; a < n; ++a) vol *= std::max(0.0, hi[a] - lo[a]);
    total += const_density * vol;

    for (const PointAtom& a : atoms)
        if (box_contains(lo, hi, a.location)) total += a.weight;

    for (const SphereAtom& a : spheres) {
        // fraction of the sphere inside the box by a deterministic rule
        auto rule = sphere_rule(n, 512);
        double inside = 0.0, all = 0.0;
        for (const auto& [d, w] : rule) {
            all += w;
            if (box_contains(lo, hi, Vec(a.radius * d))) inside += w;
        }
        total += a.mass * inside / all;
    }

    for (const RadialDensityPart& p : radial_parts) {
        double hi_r = p.r_hi;
        if (!std::isfinite(hi_r)) {
            double corner = 0.0;
            for (int a = 0; a < n; ++a)
                corner += std::max(lo[a] * lo[a], hi[a] * hi[a]);
            hi_r = std::sqrt(corner);
        }
        const double lo_r = p.r_lo;
        total += box_quadrature(
            [&](const Vec& x) {
                double r = x.norm();
                return (r > lo_r && r < hi_r) ? p.density(r) : 0.0;
            },
            lo, hi, 8);
    }

    for (const BoxDensityPart& p : box_parts) {
        Vec clo = lo.cwiseMax(p.lo), chi = hi.cwiseMin(p.hi);
        bool empty = false;
        for (int a = 0; a < n; ++a)
            if (chi[a] <= clo[a]) empty = true;
        if (!empty) total += box_quadrature(p.density, clo, chi, 6);
    }

    for (const SlabPart& p : slabs) {
        bool hit = true;
        double free_vol = 1.0;
        std::vector<bool> is_atom(n, false);
        for (int a : p.atom_axes) {
            is_atom[a] = true;
            if (p.atom_coords[a] < lo[a] - 1e-12 || p.atom_coords[a] > hi[a] + 1e-12) hit = false;
        }
        for (int a = 0; a < n; ++a)
            if (!is_atom[a]) free_vol *= std::max(0.0, hi[a] - lo[a]);
        if (hit) total += p.weight * free_vol;
    }
    return total;
}

double HessianMeasure::min_component() const {
    double m = kInf;
    m = std::min(m, const_density != 0.0 ? const_density : kInf);
    for (const PointAtom& a : atoms) m = std::min(m, a.weight);
    for (const SphereAtom& a : spheres) m = std::min(m, a.mass);
    for (const SlabPart& p : slabs) m = std::min(m, p.weight);
    for (const RadialDensityPart& p : radial_parts) {
        double hi = std::isfinite(p.r_hi) ? p.r_hi : p.r_lo + 10.0;
        for (int i = 1; i <= 32; ++i)
            m = std::min(m, p.density(p.r_lo + (hi - p.r_lo) * i / 33.0));
    }
    for (const BoxDensityPart& p : box_parts) {
        // sample the density on a coarse lattice
        const int k = 5;
        std::vector<int> idx(dim, 0);
        while (true) {
            Vec x(dim);
            for (int a = 0; a < dim; ++a)
                x[a] = p.lo[a] + (p.hi[a] - p.lo[a]) * (idx[a] + 0.5) / k;
            m = std::min(m, p.density(x));
            int a = dim - 1;
            for (; a >= 0; --a) {
                if (++idx[a] < k) break;
                idx[a] = 0;
            }
            if (a < 0) break;
        }
    }
    return std::isfinite(m) ? m : 0.0;
}

HessianMeasure phi_measure(const ConvexFunction& f, int j) {
    const int n = f.dim();
    if (j < 0 || j > n) throw IndexOutOfRange("phi_measure: need 0 <= j <= n");
    HessianMeasure mu;
    mu.dim = n;
    mu.index = j;
    mu.side = MeasureSide::Primal;  // the spatial marginal

    if (j == 0) {
        mu.const_density = 1.0;  // the 0-th marginal is Lebesgue for every input
        return mu;
    }

    switch (f.variant()) {
        case Variant::Quadratic: {
            mu.const_density = elementary_symmetric(f.quadratic_data().Q, j);
            return mu;
        }
        case Variant::RadialProfile: {
            const RadialProfileData p = f.profile_data();
            RadialDensityPart part;
            part.r_lo = 0.0;
            part.r_hi = p.r_max;
            part.density = [p, n, j](double r) {
                double lt = p.deriv(r) / r;
                double lr = p.deriv2(r);
                return elementary_symmetric_radial(n, j, lt, lr);
            };
            mu.radial_parts.push_back(std::move(part));
            return mu;
        }
        case Variant::Grid: {
            const GridData& g = f.grid_data();
            BoxDensityPart part;
            part.lo = g.lo;
            part.hi = g.hi;
            ConvexFunction fc = f;  // keep the variant alive in the callback
            part.density = [fc, j](const Vec& x) {
                try {
                    return elementary_symmetric(fc.hessian(x), j);
                } catch (const NotDifferentiable&) {
                    return 0.0;  // cells adjacent to +inf carry no smooth density
                }
            };
            mu.box_parts.push_back(std::move(part));
            return mu;
        }
        case Variant::KinkSum: {
            const KinkSumData& d = f.kink_data();
            const int m = static_cast<int>(d.axes.size());
            if (j > m) return mu;  // vanishes above the kink count
            // all j-subsets of the active axes
            std::vector<int> sel(j);
            for (int i = 0; i < j; ++i) sel[i] = i;
            while (true) {
                SlabPart slab;
                slab.weight = 1.0;
                slab.atom_coords = d.xbar;
                for (int i = 0; i < j; ++i) slab.atom_axes.push_back(d.axes[sel[i]]);
                mu.slabs.push_back(std::move(slab));
                int i = j - 1;
                while (i >= 0 && sel[i] == m - j + i) --i;
                if (i < 0) break;
                ++sel[i];
                for (int k2 = i + 1; k2 < j; ++k2) sel[k2] = sel[k2 - 1] + 1;
            }
            return mu;
        }
        case Variant::RadialConeV: {
            const RadialConeData& c = f.cone_data();
            const double t = c.t, s = c.scale;
            const double sj = std::pow(s, j);
            if (t > 0.0) {
                mu.spheres.push_back(
                    {t, unit_ball_volume(n) * binomial(n, j) * sj * std::pow(t, n - j)});
            } else if (j == n) {
                mu.atoms.push_back({Vec::Zero(n), unit_ball_volume(n) * sj});
            }
            if (j <= n - 1) {
                RadialDensityPart part;
                part.r_lo = t;
                part.r_hi = kInf;
                double coeff = binomial(n - 1, j) * sj;
                part.density = [coeff, j](double r) { return coeff / std::pow(r, j); };
                mu.radial_parts.push_back(std::move(part));
            }
            return mu;
        }
        default:
            throw UnsupportedVariant("phi_measure: unsupported variant for j >= 1");
    }
}

double psi_integral_via_conjugate(const ConvexFunction& f, int j, const ZetaProfile& zeta) {
    if (auto conj = conjugate_exact(f)) return phi_measure(*conj, j).integrate_radial(zeta);
    ConvexFunction conj = legendre(f);
    return phi_measure(conj, j).integrate_radial(zeta);
}

double level_set_curvature(const ConvexFunction& f, const Vec& x, int j) {
    const int n = f.dim();
    if (j < 0 || j > n - 1) throw IndexOutOfRange("level_set_curvature");
    double r = x.norm();
    if (r < 1e-12) throw OriginSingularity("level_set_curvature: x = 0");
    bool radial_ok = false;
    if (f.variant() == Variant::RadialProfile) {
        radial_ok = f.profile_data().deriv(r) > 0.0;
    } else if (f.variant() == Variant::Quadratic) {
        const Mat& Q = f.quadratic_data().Q;
        radial_ok = (Q - Q(0, 0) * Mat::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12 &&
                    Q(0, 0) > 0.0 && f.quadratic_data().b.norm() < 1e-12;
    }
    if (!radial_ok) throw UnsupportedVariant("level_set_curvature: need a radial increasing input");
    return binomial(n - 1, j) / std::pow(r, j);
}

double lipschitz_on_sublevel(const ConvexFunction& f, double t) {
    if (f.variant() == Variant::Quadratic) {
        const QuadraticData& q = f.quadratic_data();
        const int n = f.dim();
        if ((q.Q - q.Q(0, 0) * Mat::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12 ||
            q.b.norm() > 1e-12)
            throw UnsupportedVariant("lipschitz_on_sublevel: need a radial input");
        double c = q.Q(0, 0);
        double r = std::sqrt(std::max(0.0, 2.0 * (t - q.c) / c));
        return c * r;
    }
    if (f.variant() != Variant::RadialProfile)
        throw UnsupportedVariant("lipschitz_on_sublevel: need a radial input");
    const RadialProfileData& p = f.profile_data();
    double r_hi = std::isfinite(p.r_max) ? p.r_max : 64.0;
    if (p.value(r_hi) <= t) return std::abs(p.deriv(r_hi));
    double lo = 0.0, hi = r_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (p.value(mid) <= t ? lo : hi) = mid;
    }
    return std::abs(p.deriv(0.5 * (lo + hi)));
}

double product_decompose(const ConvexFunction& vE, const std::vector<int>& axesE,
                         const ConvexFunction& vF, const std::vector<int>& axesF, int l,
                         const Vec& lo, const Vec& hi) {
    const int n = static_cast<int>(lo.size());
    const int k = static_cast<int>(axesE.size());
    if (vE.dim() != k || vF.dim() != n - k)
        throw DimensionMismatch("product_decompose: factor dims");
    std::vector<bool> seen(n, false);
    for (int a : axesE) {
        if (a < 0 || a >= n || seen[a]) throw NonAlignedSubspaces("product_decompose: axesE");
        seen[a] = true;
    }
    for (int a : axesF) {
        if (a < 0 || a >= n || seen[a]) throw NonAlignedSubspaces("product_decompose: axesF");
        seen[a] = true;
    }
    for (bool s : seen)
        if (!s) throw NonAlignedSubspaces("product_decompose: axes must partition the space");
    if (l < 0 || l > n) throw IndexOutOfRange("product_decompose: l");

    Vec loE(k), hiE(k), loF(n - k), hiF(n - k);
    for (int i = 0; i < k; ++i) {
        loE[i] = lo[axesE[i]];
        hiE[i] = hi[axesE[i]];
    }
    for (int i = 0; i < n - k; ++i) {
        loF[i] = lo[axesF[i]];
        hiF[i] = hi[axesF[i]];
    }

    double total = 0.0;
    for (int i = std::max(0, l + k - n); i <= std::min(k, l); ++i) {
        double a = phi_measure(vE, i).measure_of_box(loE, hiE);
        double b = phi_measure(vF, l - i).measure_of_box(loF, hiF);
        total += a * b;
    }
    return total;
}

}  // namespace hessval
