#pragma once

#include "hessval/constants.hpp"
#include "hessval/errors.hpp"
#include "hessval/quadrature.hpp"

#include <vector>

namespace hessval {

// Uniform tensor grid of samples over a box.  Values may be +inf (the
// sentinel for points outside the domain); the arithmetic rules are the
// IEEE ones: inf + a = inf, min(inf, a) = a.
struct GridData {
    Vec lo, hi;
    std::vector<int> shape;  // nodes per axis, >= 2
    std::vector<double> values;

    int dim() const { return static_cast<int>(shape.size()); }

    std::size_t size() const {
        std::size_t s = 1;
        for (int m : shape) s *= m;
        return s;
    }

    double spacing(int axis) const { return (hi[axis] - lo[axis]) / (shape[axis] - 1); }

    double coord(int axis, int i) const { return lo[axis] + i * spacing(axis); }

    std::size_t flat(const std::vector<int>& idx) const {
        std::size_t f = 0;
        for (int a = 0; a < dim(); ++a) f = f * shape[a] + idx[a];
        return f;
    }

    Vec node(const std::vector<int>& idx) const {
        Vec x(dim());
        for (int a = 0; a < dim(); ++a) x[a] = coord(a, idx[a]);
        return x;
    }

    double& at(const std::vector<int>& idx) { return values[flat(idx)]; }
    double at(const std::vector<int>& idx) const { return values[flat(idx)]; }

    // Iterate over all multi-indices in row-major order.
    template <typename F>
    void for_each(F&& f) const {
        std::vector<int> idx(dim(), 0);
        const std::size_t total = size();
        for (std::size_t k = 0; k < total; ++k) {
            f(idx, k);
            for (int a = dim() - 1; a >= 0; --a) {
                if (++idx[a] < shape[a]) break;
                idx[a] = 0;
            }
        }
    }

    // Multilinear interpolation; +inf outside the box or when any corner of
    // the surrounding cell is +inf.
    double interpolate(const Vec& x) const;

    bool finite_at(const std::vector<int>& idx) const { return std::isfinite(at(idx)); }

    double max_abs_finite() const {
        double m = 0.0;
        for (double v : values)
            if (std::isfinite(v)) m = std::max(m, std::abs(v));
        return m;
    }

    static GridData make(const Vec& lo, const Vec& hi, const std::vector<int>& shape) {
        GridData g;
        g.lo = lo;
        g.hi = hi;
        g.shape = shape;
        if (lo.size() != hi.size() || static_cast<int>(shape.size()) != lo.size())
            throw DimensionMismatch("GridData::make");
        for (int m : shape)
            if (m < 2) throw Error("GridData::make: need at least 2 nodes per axis");
        g.values.assign(g.size(), kInf);
        return g;
    }
};

inline double GridData::interpolate(const Vec& x) const {
    const int n = dim();
    std::vector<int> base(n);
    std::vector<double> frac(n);
    for (int a = 0; a < n; ++a) {
        if (x[a] < lo[a] - 1e-12 || x[a] > hi[a] + 1e-12) return kInf;
        double t = (x[a] - lo[a]) / spacing(a);
        int i = static_cast<int>(std::floor(t));
        i = std::min(std::max(i, 0), shape[a] - 2);
        base[a] = i;
        frac[a] = std::min(std::max(t - i, 0.0), 1.0);
    }
    const int corners = 1 << n;
    double acc = 0.0;
    std::vector<int> idx(n);
    for (int mask = 0; mask < corners; ++mask) {
        double w = 1.0;
        for (int a = 0; a < n; ++a) {
            if ((mask >> a) & 1) {
                idx[a] = base[a] + 1;
                w *= frac[a];
            } else {
                idx[a] = base[a];
                w *= 1.0 - frac[a];
            }
        }
        double v = at(idx);
        if (!std::isfinite(v)) return kInf;
        acc += w * v;
    }
    return acc;
}

}  // namespace hessval
