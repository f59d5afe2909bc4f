#include "hessval/body.hpp"

#include "hessval/constants.hpp"
#include "hessval/errors.hpp"
#include "hessval/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hessval {

Body Body::polytope(Polytope p) {
    Body b;
    b.kind_ = Kind::Polytope;
    b.dim_ = p.dim();
    b.poly_ = std::move(p);
    return b;
}

Body Body::ball(Vec center, double radius) {
    if (radius <= 0.0) throw Error("Body::ball: radius must be > 0");
    Body b;
    b.kind_ = Kind::Ball;
    b.dim_ = static_cast<int>(center.size());
    b.center_ = std::move(center);
    b.radius_ = radius;
    return b;
}

const Polytope& Body::as_polytope() const {
    if (kind_ != Kind::Polytope) throw UnsupportedVariant("Body::as_polytope");
    return poly_;
}

double Body::support(const Vec& y) const {
    if (kind_ == Kind::Ball) return center_.dot(y) + radius_ * y.norm();
    return poly_.support(y);
}

double Body::volume() const {
    if (kind_ == Kind::Ball) return unit_ball_volume(dim_) * std::pow(radius_, dim_);
    return poly_.volume();
}

double support_function(const Body& K, const Vec& y) { return K.support(y); }

namespace {

bool is_axis_box(const Polytope& p, Vec& lo, Vec& hi) {
    const int n = p.dim();
    lo = Vec::Constant(n, kInf);
    hi = Vec::Constant(n, -kInf);
    for (const HalfSpace& h : p.halfspaces()) {
        int nz = 0, axis = -1;
        for (int a = 0; a < n; ++a)
            if (std::abs(h.normal[a]) > 1e-12) {
                ++nz;
                axis = a;
            }
        if (nz != 1) return false;
        double c = h.offset / h.normal[axis];
        if (h.normal[axis] > 0)
            hi[axis] = std::min(std::isfinite(hi[axis]) ? hi[axis] : kInf, c);
        else
            lo[axis] = std::max(std::isfinite(lo[axis]) ? lo[axis] : -kInf, c);
    }
    for (int a = 0; a < n; ++a)
        if (!std::isfinite(lo[a]) || !std::isfinite(hi[a])) return false;
    return true;
}

double dist_to_box(const Vec& lo, const Vec& hi, const Vec& z) {
    double d2 = 0.0;
    for (int a = 0; a < z.size(); ++a) {
        double c = std::clamp(z[a], lo[a], hi[a]);
        d2 += (z[a] - c) * (z[a] - c);
    }
    return std::sqrt(d2);
}

}  // namespace

double steiner_volume(const Body& K, double s, std::size_t samples, std::uint64_t seed) {
    const int n = K.dim();
    if (K.kind() == Body::Kind::Ball)
        return unit_ball_volume(n) * std::pow(K.radius() + s, n);

    const Polytope& p = K.as_polytope();
    if (n == 2) return p.volume() + p.perimeter_2d() * s + M_PI * s * s;

    Vec lo, hi;
    if (n == 3 && is_axis_box(p, lo, hi)) {
        // hit-or-miss with the clamp distance
        Vec slo = lo.array() - s, shi = hi.array() + s;
        double box_vol = 1.0;
        for (int a = 0; a < n; ++a) box_vol *= shi[a] - slo[a];
        std::size_t hits = 0, total = 0;
        const std::size_t shard_size = 1 << 16;
        Vec z(n);
        for (std::size_t shard = 0; total < samples; ++shard) {
            SplitRng rng(seed, shard);
            std::size_t count = std::min(shard_size, samples - total);
            for (std::size_t i = 0; i < count; ++i) {
                for (int a = 0; a < n; ++a) z[a] = rng.uniform(slo[a], shi[a]);
                if (dist_to_box(lo, hi, z) <= s) ++hits;
            }
            total += count;
        }
        return box_vol * double(hits) / double(total);
    }
    throw UnsupportedVariant("steiner_volume: 3-D supports balls and axis boxes");
}

std::vector<double> intrinsic_volumes(const Body& K, std::size_t samples, std::uint64_t seed) {
    const int n = K.dim();
    std::vector<double> s_grid;
    for (int k = 1; k <= 10; ++k) s_grid.push_back(0.1 * k);

    Mat X(s_grid.size(), n + 1);
    Vec y(s_grid.size());
    for (std::size_t k = 0; k < s_grid.size(); ++k) {
        y[k] = steiner_volume(K, s_grid[k], samples, seed + k);
        for (int m = 0; m <= n; ++m) X(k, m) = std::pow(s_grid[k], m);
    }
    Eigen::JacobiSVD<Mat> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    double cond = svd.singularValues()(0) / svd.singularValues()(n);
    if (!std::isfinite(cond) || cond > 1e10)
        throw DegenerateFit("intrinsic_volumes: ill-conditioned Steiner fit");
    Vec coef = svd.solve(y);

    // vol(K + sB) = sum_j kappa_{n-j} V_j s^{n-j}
    std::vector<double> V(n + 1);
    for (int j = 0; j <= n; ++j) {
        int m = n - j;
        double kappa = m == 0 ? 1.0 : unit_ball_volume(m);
        V[j] = coef[m] / kappa;
    }
    return V;
}

double ball_intrinsic_volume(int n, int j, double radius) {
    double kn = unit_ball_volume(n);
    double knj = n - j == 0 ? 1.0 : unit_ball_volume(n - j);
    return binomial(n, j) * kn / knj * std::pow(radius, j);
}

double OrthogonalSimplex::volume() const {
    double v = 1.0;
    int k = 0;
    for (const Vec& e : edges) {
        v *= e.norm();
        v /= ++k;
    }
    return v;
}

std::vector<Polytope> canonical_dissection(const OrthogonalSimplex& S, double t) {
    if (!(t > 0.0 && t < 1.0)) throw Error("canonical_dissection: need 0 < t < 1");
    const int n = static_cast<int>(S.edges.size());
    std::vector<Polytope> pieces;
    for (int k = 0; k <= n; ++k) {
        // lower part: (1-t) <x0; x1..xk>, upper part: t <x0 + sum_{i<=k} x_i; x_{k+1}..xn>
        std::vector<Vec> lower_edges, upper_edges;
        Vec upper_base = S.base;
        for (int i = 0; i < k; ++i) {
            lower_edges.push_back(Vec((1.0 - t) * S.edges[i]));
            upper_base += S.edges[i];
        }
        for (int i = k; i < n; ++i) upper_edges.push_back(Vec(t * S.edges[i]));
        Polytope lower = Polytope::orthoscheme(Vec((1.0 - t) * S.base), lower_edges);
        Polytope upper = Polytope::orthoscheme(Vec(t * upper_base), upper_edges);
        pieces.push_back(Polytope::minkowski_orthogonal(lower, upper));
    }
    return pieces;
}

McVolume mc_volume(const Polytope& P, std::size_t samples, std::uint64_t seed) {
    const int n = P.dim();
    Vec lo, hi;
    P.bounding_box(lo, hi);
    double box_vol = 1.0;
    for (int a = 0; a < n; ++a) box_vol *= hi[a] - lo[a];
    std::size_t hits = 0, total = 0;
    const std::size_t shard_size = 1 << 16;
    Vec z(n);
    for (std::size_t shard = 0; total < samples; ++shard) {
        SplitRng rng(seed, shard);
        std::size_t count = std::min(shard_size, samples - total);
        for (std::size_t i = 0; i < count; ++i) {
            for (int a = 0; a < n; ++a) z[a] = rng.uniform(lo[a], hi[a]);
            if (P.contains(z)) ++hits;
        }
        total += count;
    }
    double p = double(hits) / double(total);
    McVolume out;
    out.volume = box_vol * p;
    out.std_error = box_vol * std::sqrt(std::max(p * (1.0 - p), 1e-300) / double(total));
    return out;
}

}  // namespace hessval
