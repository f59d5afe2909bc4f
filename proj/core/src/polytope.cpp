#include "hessval/polytope.hpp"

#include "hessval/constants.hpp"
#include "hessval/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace hessval {

namespace {

// Orthonormal completion of the given (orthonormal) basis to R^dim.
std::vector<Vec> complete_basis(const std::vector<Vec>& basis, int dim) {
    std::vector<Vec> full = basis;
    for (int axis = 0; axis < dim && static_cast<int>(full.size()) < dim; ++axis) {
        Vec v = Vec::Zero(dim);
        v[axis] = 1.0;
        for (const Vec& b : full) v -= b.dot(v) * b;
        if (v.norm() > 1e-10) full.push_back(v.normalized());
    }
    return full;
}

}  // namespace

Polytope Polytope::box(const Vec& lo, const Vec& hi) {
    const int n = static_cast<int>(lo.size());
    if (hi.size() != n) throw DimensionMismatch("box: lo/hi size mismatch");
    Polytope p;
    p.dim_ = n;
    p.affine_dim_ = n;
    if (n == 2) {
        // counter-clockwise, so edge-cyclic operations stay valid
        for (auto [i, j] : {std::pair{0, 0}, {1, 0}, {1, 1}, {0, 1}}) {
            Vec v(2);
            v << (i ? hi[0] : lo[0]), (j ? hi[1] : lo[1]);
            p.vertices_.push_back(v);
        }
    } else {
        const int corners = 1 << n;
        for (int mask = 0; mask < corners; ++mask) {
            Vec v(n);
            for (int i = 0; i < n; ++i) v[i] = (mask >> i) & 1 ? hi[i] : lo[i];
            p.vertices_.push_back(v);
        }
    }
    double vol = 1.0;
    for (int i = 0; i < n; ++i) {
        Vec plus = Vec::Zero(n), minus = Vec::Zero(n);
        plus[i] = 1.0;
        minus[i] = -1.0;
        p.halfspaces_.push_back({plus, hi[i]});
        p.halfspaces_.push_back({minus, -lo[i]});
        vol *= hi[i] - lo[i];
        Vec b = Vec::Zero(n);
        b[i] = 1.0;
        p.dir_basis_.push_back(b);
    }
    p.exact_volume_ = vol;
    return p;
}

Polytope Polytope::interval(double a, double b) {
    Vec lo(1), hi(1);
    lo << a;
    hi << b;
    return box(lo, hi);
}

Polytope Polytope::point(const Vec& x) {
    Polytope p;
    p.dim_ = static_cast<int>(x.size());
    p.affine_dim_ = 0;
    p.vertices_.push_back(x);
    p.exact_volume_ = 1.0;  // 0-dimensional counting measure
    p.add_equality_constraints();
    return p;
}

Polytope Polytope::hull_2d(const std::vector<Vec>& points) {
    if (points.empty()) throw EmptyDomain("hull_2d: no points");
    std::vector<Vec> pts = points;
    std::sort(pts.begin(), pts.end(), [](const Vec& a, const Vec& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec& a, const Vec& b) { return (a - b).norm() < 1e-12; }),
              pts.end());

    auto cross = [](const Vec& o, const Vec& a, const Vec& b) {
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
    };
    // Andrew monotone chain, counter-clockwise result.
    std::vector<Vec> hull;
    if (pts.size() <= 2) {
        hull = pts;
    } else {
        std::vector<Vec> lower, upper;
        for (const Vec& p : pts) {
            while (lower.size() >= 2 && cross(lower[lower.size() - 2], lower.back(), p) <= 1e-14)
                lower.pop_back();
            lower.push_back(p);
        }
        for (auto it = pts.rbegin(); it != pts.rend(); ++it) {
            while (upper.size() >= 2 && cross(upper[upper.size() - 2], upper.back(), *it) <= 1e-14)
                upper.pop_back();
            upper.push_back(*it);
        }
        lower.pop_back();
        upper.pop_back();
        hull = lower;
        hull.insert(hull.end(), upper.begin(), upper.end());
    }

    Polytope p;
    p.dim_ = 2;
    p.vertices_ = hull;
    if (hull.size() == 1) {
        return point(hull[0]);
    }
    if (hull.size() == 2) {
        Vec d = (hull[1] - hull[0]).normalized();
        p.affine_dim_ = 1;
        p.dir_basis_ = {d};
        p.halfspaces_.push_back({d, d.dot(hull[1])});
        p.halfspaces_.push_back({Vec(-d), -d.dot(hull[0])});
        p.exact_volume_ = (hull[1] - hull[0]).norm();
        p.add_equality_constraints();
        return p;
    }
    p.affine_dim_ = 2;
    Vec e0 = Vec::Zero(2), e1 = Vec::Zero(2);
    e0[0] = 1.0;
    e1[1] = 1.0;
    p.dir_basis_ = {e0, e1};
    const int m = static_cast<int>(hull.size());
    for (int i = 0; i < m; ++i) {
        Vec a = hull[i], b = hull[(i + 1) % m];
        Vec normal(2);
        normal << (b[1] - a[1]), -(b[0] - a[0]);  // outward for CCW order
        double len = normal.norm();
        if (len < 1e-14) continue;
        normal /= len;
        p.halfspaces_.push_back({normal, normal.dot(a)});
    }
    p.exact_volume_ = shoelace(hull);
    return p;
}

Polytope Polytope::orthoscheme(const Vec& x0, const std::vector<Vec>& edges) {
    if (edges.empty()) return point(x0);
    const int n = static_cast<int>(x0.size());
    const int k = static_cast<int>(edges.size());
    Polytope p;
    p.dim_ = n;
    p.affine_dim_ = k;
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j)
            if (std::abs(edges[i].dot(edges[j])) > 1e-9 * edges[i].norm() * edges[j].norm())
                throw NonAlignedSubspaces("orthoscheme: edges not pairwise orthogonal");
    }
    Vec v = x0;
    p.vertices_.push_back(v);
    double vol = 1.0;
    for (int i = 0; i < k; ++i) {
        v += edges[i];
        p.vertices_.push_back(v);
        vol *= edges[i].norm();
        p.dir_basis_.push_back(edges[i].normalized());
    }
    for (int i = 0; i <= k; ++i) vol /= std::max(1, i);  // divide by k!
    p.exact_volume_ = vol;

    // Chain inequalities 1 >= c_1 >= ... >= c_k >= 0 in edge coordinates,
    // where c_i = <x - x0, e_i>/|e_i|^2.
    auto coord_normal = [&](int i) { return Vec(edges[i] / edges[i].squaredNorm()); };
    {
        Vec a = coord_normal(0);
        p.halfspaces_.push_back({a, 1.0 + a.dot(x0)});
    }
    for (int i = 0; i + 1 < k; ++i) {
        Vec a = coord_normal(i + 1) - coord_normal(i);
        p.halfspaces_.push_back({a, a.dot(x0)});
    }
    {
        Vec a = -coord_normal(k - 1);
        p.halfspaces_.push_back({a, a.dot(x0)});
    }
    if (k < n) p.add_equality_constraints();
    return p;
}

Polytope Polytope::minkowski_orthogonal(const Polytope& p, const Polytope& q) {
    if (p.dim() != q.dim()) throw DimensionMismatch("minkowski_orthogonal: ambient dims differ");
    for (const Vec& a : p.dir_basis_)
        for (const Vec& b : q.dir_basis_)
            if (std::abs(a.dot(b)) > 1e-9)
                throw NonAlignedSubspaces("minkowski_orthogonal: direction spaces overlap");

    Polytope r;
    r.dim_ = p.dim();
    r.affine_dim_ = p.affine_dim_ + q.affine_dim_;
    // For factors in orthogonal subspaces every pairwise vertex sum is a
    // vertex of the sum.
    for (const Vec& a : p.vertices_)
        for (const Vec& b : q.vertices_) r.vertices_.push_back(a + b);
    r.dir_basis_ = p.dir_basis_;
    r.dir_basis_.insert(r.dir_basis_.end(), q.dir_basis_.begin(), q.dir_basis_.end());

    // A factor's half-space normal lies in its own direction space, so it
    // stays valid after adding the other factor's (constant) contribution.
    const Vec& q0 = q.vertices_.front();
    const Vec& p0 = p.vertices_.front();
    for (const HalfSpace& h : p.halfspaces_) {
        double shift = h.normal.dot(q0);
        bool constant_on_q = true;
        for (const Vec& b : q.vertices_)
            if (std::abs(h.normal.dot(b) - shift) > 1e-9) constant_on_q = false;
        if (constant_on_q) r.halfspaces_.push_back({h.normal, h.offset + shift});
    }
    for (const HalfSpace& h : q.halfspaces_) {
        double shift = h.normal.dot(p0);
        bool constant_on_p = true;
        for (const Vec& a : p.vertices_)
            if (std::abs(h.normal.dot(a) - shift) > 1e-9) constant_on_p = false;
        if (constant_on_p) r.halfspaces_.push_back({h.normal, h.offset + shift});
    }
    if (r.affine_dim_ < r.dim_) r.add_equality_constraints();

    if (p.exact_volume_ && q.exact_volume_) r.exact_volume_ = *p.exact_volume_ * *q.exact_volume_;
    return r;
}

Polytope Polytope::embedded_box(int dim, const std::vector<int>& axes, const Vec& lo,
                                const Vec& hi) {
    Polytope p;
    p.dim_ = dim;
    p.affine_dim_ = static_cast<int>(axes.size());
    const int corners = 1 << axes.size();
    for (int mask = 0; mask < corners; ++mask) {
        Vec v = lo;
        for (std::size_t i = 0; i < axes.size(); ++i)
            if ((mask >> i) & 1) v[axes[i]] = hi[axes[i]];
        p.vertices_.push_back(v);
    }
    double vol = 1.0;
    for (int a : axes) {
        Vec plus = Vec::Zero(dim), minus = Vec::Zero(dim);
        plus[a] = 1.0;
        minus[a] = -1.0;
        p.halfspaces_.push_back({plus, hi[a]});
        p.halfspaces_.push_back({minus, -lo[a]});
        vol *= hi[a] - lo[a];
        Vec b = Vec::Zero(dim);
        b[a] = 1.0;
        p.dir_basis_.push_back(b);
    }
    p.exact_volume_ = vol;
    if (p.affine_dim_ < dim) p.add_equality_constraints();
    return p;
}

void Polytope::add_equality_constraints() {
    std::vector<Vec> full = complete_basis(dir_basis_, dim_);
    const Vec& x0 = vertices_.front();
    for (int i = affine_dim_; i < static_cast<int>(full.size()); ++i) {
        double c = full[i].dot(x0);
        halfspaces_.push_back({full[i], c});
        halfspaces_.push_back({Vec(-full[i]), -c});
    }
}

bool Polytope::contains(const Vec& x, double tol) const {
    if (x.size() != dim_) throw DimensionMismatch("Polytope::contains");
    for (const HalfSpace& h : halfspaces_)
        if (h.normal.dot(x) > h.offset + tol) return false;
    return true;
}

double Polytope::support(const Vec& y) const {
    double best = -kInf;
    for (const Vec& v : vertices_) best = std::max(best, y.dot(v));
    return best;
}

double Polytope::volume() const {
    if (exact_volume_) return *exact_volume_;
    if (dim_ == 2 && affine_dim_ == 2) return shoelace(vertices_);
    throw UnsupportedVariant("Polytope::volume: no exact volume for this polytope");
}

void Polytope::bounding_box(Vec& lo, Vec& hi) const {
    lo = Vec::Constant(dim_, kInf);
    hi = Vec::Constant(dim_, -kInf);
    for (const Vec& v : vertices_) {
        lo = lo.cwiseMin(v);
        hi = hi.cwiseMax(v);
    }
}

double Polytope::perimeter_2d() const {
    if (dim_ != 2) throw DimensionMismatch("perimeter_2d: dim != 2");
    // order vertices by angle around the centroid; valid for convex sets
    Vec c = Vec::Zero(2);
    for (const Vec& v : vertices_) c += v;
    c /= double(vertices_.size());
    std::vector<Vec> order = vertices_;
    std::sort(order.begin(), order.end(), [&](const Vec& a, const Vec& b) {
        return std::atan2(a[1] - c[1], a[0] - c[0]) < std::atan2(b[1] - c[1], b[0] - c[0]);
    });
    double len = 0.0;
    const int m = static_cast<int>(order.size());
    for (int i = 0; i < m; ++i) len += (order[(i + 1) % m] - order[i]).norm();
    return len;
}

Polytope Polytope::clipped_2d(const HalfSpace& h) const {
    if (dim_ != 2 || affine_dim_ != 2) throw DimensionMismatch("clipped_2d: need full 2-D polygon");
    std::vector<Vec> out;
    const int m = static_cast<int>(vertices_.size());
    for (int i = 0; i < m; ++i) {
        const Vec& a = vertices_[i];
        const Vec& b = vertices_[(i + 1) % m];
        double da = h.offset - h.normal.dot(a);
        double db = h.offset - h.normal.dot(b);
        if (da >= -1e-12) out.push_back(a);
        if ((da > 1e-12 && db < -1e-12) || (da < -1e-12 && db > 1e-12)) {
            double t = da / (da - db);
            out.push_back(a + t * (b - a));
        }
    }
    if (out.empty()) throw EmptyDomain("clipped_2d: empty intersection");
    return hull_2d(out);
}

Polytope Polytope::scaled(double lambda) const {
    if (lambda <= 0.0) throw NonpositiveScale("Polytope::scaled");
    Polytope r = *this;
    for (Vec& v : r.vertices_) v *= lambda;
    for (HalfSpace& h : r.halfspaces_) h.offset *= lambda;
    if (r.exact_volume_) r.exact_volume_ = *r.exact_volume_ * std::pow(lambda, affine_dim_);
    return r;
}

Polytope Polytope::translated(const Vec& shift) const {
    Polytope r = *this;
    for (Vec& v : r.vertices_) v += shift;
    for (HalfSpace& h : r.halfspaces_) h.offset += h.normal.dot(shift);
    return r;
}

double Polytope::consistency_gap() const {
    double gap = 0.0;
    for (const HalfSpace& h : halfspaces_) {
        double tight = -kInf;
        for (const Vec& v : vertices_) {
            double s = h.normal.dot(v);
            gap = std::max(gap, s - h.offset);  // violation
            tight = std::max(tight, s);
        }
        gap = std::max(gap, h.offset - tight);  // slack half-space
    }
    return gap;
}

double Polytope::shoelace(const std::vector<Vec>& ccw) {
    double a = 0.0;
    const int m = static_cast<int>(ccw.size());
    for (int i = 0; i < m; ++i) {
        const Vec& p = ccw[i];
        const Vec& q = ccw[(i + 1) % m];
        a += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::abs(a);
}

}  // namespace hessval
