#pragma once

#include "hessval/convex_function.hpp"
#include "hessval/zeta_profile.hpp"

#include <functional>

namespace hessval {

enum class Side { Primal, Dual };
enum class Route { Quadrature, ClosedForm, Moreau };

// Description of a valuation of degree j with weight zeta: which side it
// lives on (super-coercive inputs for the primal gradient form, finite
// inputs for the dual spatial form) and how to evaluate it.
struct ValuationSpec {
    int degree = 0;  // j in {0, ..., n}
    int dim = 0;
    ZetaProfile zeta;
    Side side = Side::Primal;
    Route route = Route::Quadrature;
    std::vector<double> lambdas;  // Moreau route nodes; default {1, ..., j+1}

    static ValuationSpec primal(int dim, int degree, ZetaProfile zeta,
                                Route route = Route::Quadrature);
    static ValuationSpec dual(int dim, int degree, ZetaProfile zeta,
                              Route route = Route::Quadrature);
};

// Direct quadrature of the degree-j integrand for smooth inputs:
// primal  int zeta(|grad u|) [D^2 u]_{n-j} dx,
// dual    int zeta(|x|) [D^2 v]_j dx.
// Quadratics use exact radial moments crossed with an angular rule;
// radial profiles reduce to one dimension; grids use cell quadrature.
double valuate_smooth(const ValuationSpec& spec, const ConvexFunction& f);

// Closed form on the cone family: kappa_n C(n,j) rho(t), valid on both
// sides of the duality.
double valuate_cone(const ValuationSpec& spec, double t);

struct MoreauResult {
    double value = 0.0;       // the degree-j component
    Vec components;           // all recovered Z_i, i = 0..j
    Vec smoothed;             // Z_{j,zeta,lambda} per lambda node
    double condition = 0.0;   // condition estimate of the Vandermonde system
};

// Z_{j,zeta,lambda}(u): the degree-j integrand evaluated on the
// Moreau-Yosida envelope of u.
double valuate_moreau_at(const ValuationSpec& spec, const ConvexFunction& u, double lambda);

// Recovers Z_{j,zeta}(u) from a lambda sweep through the binomial
// expansion of the smoothed valuation (Vandermonde solve).
MoreauResult valuate_moreau(const ValuationSpec& spec, const ConvexFunction& u);

// Route dispatcher; also covers the exact measure routes for the cone and
// kink families and degree-n on piecewise-affine functions.
double valuate(const ValuationSpec& spec, const ConvexFunction& f);

// Homogeneous decomposition of an opaque valuation: solves
// Z(lambda o u) = sum lambda^i Z_i(u) at lambda = 1..n+1.
std::vector<double> homogeneous_components(
    const std::function<double(const ConvexFunction&)>& Z, const ConvexFunction& u, int n);

// |Z(u) + Z(v) - Z(u v v) - Z(u ^ v)|.  One-dimensional C^2 pairs are
// integrated piecewise across the crossing points.
double valuation_property_residual(const ValuationSpec& spec, const ConvexFunction& u,
                                   const ConvexFunction& v);

// Additivity of the degree-n valuation over the pieces of a
// piecewise-affine function.
double pwa_additivity_residual(const ValuationSpec& spec, const ConvexFunction& pwa);

// max of the epi-translation and rotation invariance defects.
double invariance_residual(const ValuationSpec& spec, const ConvexFunction& u, const Vec& shift,
                           double offset, const Mat& rotation);

// Residual of the three-term integration-by-parts identity between the
// sublevels t1 < t2 of a radial strictly convex input.
double reilly_identity_residual(const ZetaProfile& zeta, int j, const ConvexFunction& u,
                                double t1, double t2);

}  // namespace hessval
