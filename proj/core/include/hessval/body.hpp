#pragma once

#include "hessval/polytope.hpp"

#include <cstdint>
#include <vector>

namespace hessval {

// Convex body: a polytope or a ball.
class Body {
public:
    enum class Kind { Polytope, Ball };

    static Body polytope(Polytope p);
    static Body ball(Vec center, double radius);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    const Polytope& as_polytope() const;
    const Vec& center() const { return center_; }
    double radius() const { return radius_; }

    double support(const Vec& y) const;
    double volume() const;

private:
    Kind kind_ = Kind::Ball;
    int dim_ = 0;
    Polytope poly_;
    Vec center_;
    double radius_ = 0.0;
};

double support_function(const Body& K, const Vec& y);

// vol(K + s B^n): exact for balls and 2-D polytopes, Monte-Carlo (seeded)
// for 3-D axis-aligned boxes.
double steiner_volume(const Body& K, double s, std::size_t samples = 1000000,
                      std::uint64_t seed = 42);

// Intrinsic volumes V_0..V_n through a least-squares fit of the Steiner
// polynomial on the s-grid {0.1, ..., 1.0}.
std::vector<double> intrinsic_volumes(const Body& K, std::size_t samples = 1000000,
                                      std::uint64_t seed = 42);

// V_j of a ball of the given radius (used as an oracle and by the
// estimate checks).
double ball_intrinsic_volume(int n, int j, double radius);

struct OrthogonalSimplex {
    Vec base;                // x0
    std::vector<Vec> edges;  // pairwise orthogonal x1, ..., xn

    Polytope to_polytope() const { return Polytope::orthoscheme(base, edges); }
    double volume() const;
};

// The n+1 Minkowski-sum pieces (1-t) S_k + t S'_{n-k} of the canonical
// dissection; pieces have pairwise disjoint interiors and tile S.
std::vector<Polytope> canonical_dissection(const OrthogonalSimplex& S, double t);

struct McVolume {
    double volume = 0.0;
    double std_error = 0.0;
};

McVolume mc_volume(const Polytope& P, std::size_t samples = 1000000, std::uint64_t seed = 42);

}  // namespace hessval
