#include "hessval/ps_volume.hpp"

#include "hessval/rng.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace hessval {

BaseRegion BaseRegion::box(Vec lo_, Vec hi_) {
    BaseRegion r;
    r.kind = Kind::Box;
    r.lo = std::move(lo_);
    r.hi = std::move(hi_);
    return r;
}
BaseRegion BaseRegion::ball(double radius) {
    BaseRegion r;
    r.kind = Kind::Ball;
    r.r1 = radius;
    return r;
}
BaseRegion BaseRegion::sphere(double radius) {
    BaseRegion r;
    r.kind = Kind::Sphere;
    r.r0 = radius;
    return r;
}
BaseRegion BaseRegion::annulus(double inner, double outer) {
    BaseRegion r;
    r.kind = Kind::Annulus;
    r.r0 = inner;
    r.r1 = outer;
    return r;
}

bool BaseRegion::contains(const Vec& x) const {
    switch (kind) {
        case Kind::Box:
            for (int a = 0; a < x.size(); ++a)
                if (x[a] < lo[a] || x[a] > hi[a]) return false;
            return true;
        case Kind::Ball:
            return x.norm() <= r1;
        case Kind::Sphere:
            return std::abs(x.norm() - r0) <= 1e-12;
        case Kind::Annulus: {
            double r = x.norm();
            return r >= r0 && r <= r1;
        }
    }
    return false;
}

namespace {

double region_radius(const BaseRegion& A) {
    switch (A.kind) {
        case BaseRegion::Kind::Box: {
            double r2 = 0.0;
            for (int a = 0; a < A.lo.size(); ++a)
                r2 += std::max(A.lo[a] * A.lo[a], A.hi[a] * A.hi[a]);
            return std::sqrt(r2);
        }
        case BaseRegion::Kind::Ball:
            return A.r1;
        case BaseRegion::Kind::Sphere:
            return A.r0;
        case BaseRegion::Kind::Annulus:
            return A.r1;
    }
    return 0.0;
}

// Membership test for z in P_s(f, A x R^n) via the inverse of the
// expansion map, together with a bounding box for the sampler.
struct ExpansionMap {
    std::function<bool(const Vec&)> member;
    Vec lo, hi;
};

ExpansionMap build_map(const ConvexFunction& f, const BaseRegion& A, double s) {
    const int n = f.dim();
    ExpansionMap m;
    switch (f.variant()) {
        case Variant::Quadratic: {
            const QuadraticData& q = f.quadratic_data();
            Mat M = Mat::Identity(n, n) + s * q.Q;
            Eigen::PartialPivLU<Mat> lu(M);
            Vec sb = s * q.b;
            m.member = [lu, sb, A](const Vec& z) {
                Vec x = lu.solve(Vec(z - sb));
                return A.contains(x);
            };
            // image of the region radius ball under x + s(Qx + b)
            double R = region_radius(A);
            double opnorm = M.cwiseAbs().rowwise().sum().maxCoeff();
            double rad = opnorm * R + sb.norm();
            m.lo = Vec::Constant(n, -rad);
            m.hi = Vec::Constant(n, rad);
            if (A.kind == BaseRegion::Kind::Box) {
                // tighter: map the box corners through the linear expansion
                m.lo = Vec::Constant(n, kInf);
                m.hi = Vec::Constant(n, -kInf);
                const int corners = 1 << n;
                for (int mask = 0; mask < corners; ++mask) {
                    Vec x(n);
                    for (int a = 0; a < n; ++a) x[a] = (mask >> a) & 1 ? A.hi[a] : A.lo[a];
                    Vec z = M * x + sb;
                    m.lo = m.lo.cwiseMin(z);
                    m.hi = m.hi.cwiseMax(z);
                }
            }
            return m;
        }
        case Variant::KinkSum: {
            const KinkSumData d = f.kink_data();
            m.member = [d, A, s, n](const Vec& z) {
                Vec x = z;
                for (int a : d.axes) {
                    if (z[a] < d.xbar[a] - s / 2)
                        x[a] = z[a] + s / 2;
                    else if (z[a] > d.xbar[a] + s / 2)
                        x[a] = z[a] - s / 2;
                    else
                        x[a] = d.xbar[a];
                }
                return A.contains(x);
            };
            double R = region_radius(A);
            m.lo = Vec::Constant(n, -R - s);
            m.hi = Vec::Constant(n, R + s);
            if (A.kind == BaseRegion::Kind::Box) {
                m.lo = A.lo;
                m.hi = A.hi;
                for (int a : d.axes) {
                    m.lo[a] -= s / 2;
                    m.hi[a] += s / 2;
                }
            }
            return m;
        }
        case Variant::RadialConeV: {
            const RadialConeData c = f.cone_data();
            const double t = c.t, sc = c.scale;
            m.member = [t, sc, A, s, n](const Vec& z) {
                double r = z.norm();
                Vec x(n);
                if (r <= t) {
                    x = z;
                } else if (r <= t + s * sc) {
                    x = r > 1e-300 ? Vec(t / r * z) : Vec::Zero(n);
                } else {
                    x = Vec((r - s * sc) / r * z);
                }
                return A.contains(x);
            };
            double rad = region_radius(A) + s * sc;
            m.lo = Vec::Constant(n, -rad);
            m.hi = Vec::Constant(n, rad);
            return m;
        }
        default:
            throw UnsupportedVariant("ps_volume: subgradient map not available for this variant");
    }
}

}  // namespace

PsVolumeEstimate ps_volume(const ConvexFunction& f, const BaseRegion& A, double s,
                           std::size_t samples, std::uint64_t seed) {
    if (s < 0.0) throw Error("ps_volume: s must be >= 0");
    const int n = f.dim();
    ExpansionMap map = build_map(f, A, s);
    double box_vol = 1.0;
    for (int a = 0; a < n; ++a) box_vol *= map.hi[a] - map.lo[a];

    const std::size_t shard_size = 1 << 16;
    std::size_t hits = 0, total = 0;
    Vec z(n);
    for (std::size_t shard = 0; total < samples; ++shard) {
        SplitRng rng(seed, shard);
        std::size_t count = std::min(shard_size, samples - total);
        for (std::size_t i = 0; i < count; ++i) {
            for (int a = 0; a < n; ++a) z[a] = rng.uniform(map.lo[a], map.hi[a]);
            if (map.member(z)) ++hits;
        }
        total += count;
    }
    double p = double(hits) / double(total);
    PsVolumeEstimate est;
    est.volume = box_vol * p;
    est.std_error = box_vol * std::sqrt(std::max(p * (1.0 - p), 1e-300) / double(total));
    est.samples = total;
    return est;
}

ThetaCoefficients theta_coefficients(const ConvexFunction& f, const BaseRegion& A,
                                     const std::vector<double>& s_grid, std::size_t samples,
                                     std::uint64_t seed) {
    const int n = f.dim();
    const int m = static_cast<int>(s_grid.size());
    if (m < n + 1) throw DegenerateFit("theta_coefficients: need at least n+1 grid points");

    Vec vols(m), sigmas(m);
    for (int k = 0; k < m; ++k) {
        // disjoint shard ranges per grid point keep the estimates independent
        PsVolumeEstimate est = ps_volume(f, A, s_grid[k], samples, seed + 0x1000003ULL * k);
        vols[k] = est.volume;
        sigmas[k] = est.std_error;
    }

    Mat X(m, n + 1);
    for (int k = 0; k < m; ++k)
        for (int j = 0; j <= n; ++j) X(k, j) = std::pow(s_grid[k], j);

    Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double cond = svd.singularValues()(0) / svd.singularValues()(n);
    if (!std::isfinite(cond) || cond > 1e10)
        throw DegenerateFit("theta_coefficients: ill-conditioned s-grid, condition " +
                            std::to_string(cond));

    Vec coef = svd.solve(vols);

    // error propagation through the pseudo-inverse
    Mat pinv = svd.matrixV() * svd.singularValues().cwiseInverse().asDiagonal() *
               svd.matrixU().transpose();
    Vec err(n + 1);
    for (int j = 0; j <= n; ++j) {
        double v = 0.0;
        for (int k = 0; k < m; ++k) v += pinv(j, k) * pinv(j, k) * sigmas[k] * sigmas[k];
        err[j] = std::sqrt(v);
    }

    ThetaCoefficients out;
    out.value.assign(coef.data(), coef.data() + n + 1);
    out.std_error.assign(err.data(), err.data() + n + 1);
    out.condition = cond;
    return out;
}

}  // namespace hessval
