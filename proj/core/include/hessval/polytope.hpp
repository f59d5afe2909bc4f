#pragma once

#include "hessval/quadrature.hpp"

#include <optional>
#include <vector>

namespace hessval {

struct HalfSpace {
    Vec normal;     // outward normal a
    double offset;  // a . x <= offset
};

// Convex polytope kept in the dual representation: vertex list and
// half-space list, consistent with each other.  Degenerate (lower
// affine-dimensional) polytopes carry equality constraints as paired
// half-spaces.  Construct through the named factories; they fill in the
// exact volume where one is known.
class Polytope {
public:
    Polytope() = default;

    static Polytope box(const Vec& lo, const Vec& hi);
    static Polytope interval(double a, double b);
    static Polytope point(const Vec& x);
    // Convex hull of 2-D points, vertices in counter-clockwise order.
    static Polytope hull_2d(const std::vector<Vec>& points);
    // Path simplex with vertices x0, x0+e1, x0+e1+e2, ...; the edge vectors
    // must be pairwise orthogonal.  May be lower-dimensional in R^dim.
    static Polytope orthoscheme(const Vec& x0, const std::vector<Vec>& edges);
    // Minkowski sum of polytopes whose direction spaces are orthogonal.
    static Polytope minkowski_orthogonal(const Polytope& p, const Polytope& q);
    // Box over a subset of axes, degenerate (fixed at lo) on the others.
    static Polytope embedded_box(int dim, const std::vector<int>& axes, const Vec& lo,
                                 const Vec& hi);

    int dim() const { return dim_; }
    int affine_dim() const { return affine_dim_; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    const std::vector<HalfSpace>& halfspaces() const { return halfspaces_; }

    bool contains(const Vec& x, double tol = 1e-9) const;
    double support(const Vec& y) const;

    // Volume in the affine dimension.  Exact for boxes, 2-D polygons,
    // orthoschemes and orthogonal Minkowski sums.
    double volume() const;
    bool has_exact_volume() const { return exact_volume_.has_value(); }

    // Axis-aligned bounding box of the vertices.
    void bounding_box(Vec& lo, Vec& hi) const;

    // 2-D only: boundary length.
    double perimeter_2d() const;

    // 2-D only: intersect with a half-space (Sutherland-Hodgman clip).
    Polytope clipped_2d(const HalfSpace& h) const;

    Polytope scaled(double lambda) const;
    Polytope translated(const Vec& shift) const;

    // Max violation of vertex/half-space consistency: vertices must satisfy
    // every half-space and every half-space must be tight at some vertex.
    double consistency_gap() const;

    // Orthonormal basis of the direction space (for degenerate polytopes).
    const std::vector<Vec>& direction_basis() const { return dir_basis_; }

private:
    int dim_ = 0;
    int affine_dim_ = 0;
    std::vector<Vec> vertices_;
    std::vector<HalfSpace> halfspaces_;
    std::vector<Vec> dir_basis_;
    std::optional<double> exact_volume_;

    void add_equality_constraints();
    static double shoelace(const std::vector<Vec>& ccw);
};

}  // namespace hessval
