#pragma once

#include "hessval/convex_function.hpp"
#include "hessval/zeta_profile.hpp"

#include <functional>
#include <vector>

namespace hessval {

struct PointAtom {
    Vec location;
    double weight;
};

// Uniform mass on radius * S^{n-1}.
struct SphereAtom {
    double radius;
    double mass;
};

// Radial Lebesgue density on the annulus r_lo < |x| < r_hi.
struct RadialDensityPart {
    double r_lo, r_hi;  // r_hi may be +inf; integrals truncate at the test support
    std::function<double(double)> density;
};

struct BoxDensityPart {
    Vec lo, hi;
    std::function<double(const Vec&)> density;
};

// Dirac in the listed coordinates, Lebesgue in the others.
struct SlabPart {
    std::vector<int> atom_axes;
    Vec atom_coords;  // full-dimensional vector; only atom_axes entries are read
    double weight;
};

enum class MeasureSide { Primal, Dual, Joint };

// Hybrid measure on R^n assembled from point atoms, sphere-uniform parts,
// slabs, and density parts.  The marginals of the graph measures of a
// convex function are all of this form for the supported families.
class HessianMeasure {
public:
    int dim = 0;
    int index = 0;  // the degree j
    MeasureSide side = MeasureSide::Primal;

    double const_density = 0.0;  // constant Lebesgue density on all of R^n
    std::vector<PointAtom> atoms;
    std::vector<SphereAtom> spheres;
    std::vector<RadialDensityPart> radial_parts;
    std::vector<BoxDensityPart> box_parts;
    std::vector<SlabPart> slabs;

    // integral of zeta(|x|) against the measure; zeta's bounded support
    // truncates the unbounded parts.
    double integrate_radial(const ZetaProfile& zeta) const;

    // measure of an axis-aligned box
    double measure_of_box(const Vec& lo, const Vec& hi) const;

    // smallest atom weight / sphere mass / sampled density (for the
    // non-negativity invariant)
    double min_component() const;
};

// Spatial marginal measure of degree j of the graph measure of f.
// Supported: Quadratic, RadialProfile (C^2), Grid (finite differences),
// the kink family, RadialConeV, and indicator+linear over a box (j = 0).
HessianMeasure phi_measure(const ConvexFunction& f, int j);

// int zeta(|y|) dPsi_j(f, y), routed through the conjugate's spatial
// marginal.
double psi_integral_via_conjugate(const ConvexFunction& f, int j, const ZetaProfile& zeta);

// j-th elementary symmetric function of the principal curvatures of the
// sublevel boundary through x, for radial strictly increasing inputs:
// C(n-1, j) / |x|^j.
double level_set_curvature(const ConvexFunction& f, const Vec& x, int j);

// Lipschitz constant of f on the sublevel set {f <= t}.
double lipschitz_on_sublevel(const ConvexFunction& f, double t);

// Phi_l of v_E + v_F on a box, assembled from the marginal measures of the
// factors on complementary coordinate subspaces.
double product_decompose(const ConvexFunction& vE, const std::vector<int>& axesE,
                         const ConvexFunction& vF, const std::vector<int>& axesF, int l,
                         const Vec& lo, const Vec& hi);

}  // namespace hessval
