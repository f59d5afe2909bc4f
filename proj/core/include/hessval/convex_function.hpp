#pragma once

#include "hessval/grid_fn.hpp"
#include "hessval/polytope.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace hessval {

enum class Variant {
    Grid,
    PiecewiseAffine,
    Quadratic,
    RadialConeU,     // t|x| + indicator of a ball
    RadialConeV,     // scale * max(|x| - t, 0)
    RadialProfile,   // phi(|x|) on a ball
    IndicatorLinear, // <slope, x> + indicator of a polytope
    KinkSum,         // (1/2) sum over active axes of |x_i - xbar_i|
};

struct PwaPiece {
    Vec slope;
    double offset;
    Polytope region;
};

struct QuadraticData {
    Mat Q;  // symmetric PSD
    Vec b;
    double c;
};

struct RadialConeData {
    double t;
    double ball_radius = 1.0;  // RadialConeU: indicator of ball_radius * B^n
    double scale = 1.0;        // RadialConeV: pointwise multiple
};

// 1-D convex profile on [0, r_max].  Either uniformly sampled, or backed by
// analytic callbacks for phi, phi', phi''.
struct RadialProfileData {
    double r_max = 0.0;
    std::vector<double> samples;
    std::function<double(double)> phi, dphi, ddphi;

    bool analytic() const { return static_cast<bool>(phi); }
    double value(double r) const;
    double deriv(double r) const;
    double deriv2(double r) const;
};

struct IndicatorLinearData {
    Polytope region;
    Vec slope;
};

struct KinkSumData {
    Vec xbar;                // only entries listed in axes are used
    std::vector<int> axes;   // active coordinate axes
};

// Tagged representation of an extended-real convex function on R^n.
// Immutable after construction; all operations are value-producing.
class ConvexFunction {
public:
    static ConvexFunction grid(GridData g);
    static ConvexFunction piecewise_affine(int dim, std::vector<PwaPiece> pieces);
    static ConvexFunction quadratic(Mat Q, Vec b, double c);
    static ConvexFunction radial_cone_u(int dim, double t, double ball_radius = 1.0);
    static ConvexFunction radial_cone_v(int dim, double t, double scale = 1.0);
    static ConvexFunction radial_profile(int dim, double r_max, std::vector<double> samples);
    static ConvexFunction radial_profile(int dim, double r_max,
                                         std::function<double(double)> phi,
                                         std::function<double(double)> dphi,
                                         std::function<double(double)> ddphi);
    static ConvexFunction indicator_linear(Polytope region, Vec slope);
    static ConvexFunction kink_sum(int dim, Vec xbar, std::vector<int> axes);

    Variant variant() const { return variant_; }
    int dim() const { return dim_; }

    double evaluate(const Vec& x) const;
    Vec gradient(const Vec& x) const;
    Mat hessian(const Vec& x) const;

    const GridData& grid_data() const;
    const std::vector<PwaPiece>& pwa_pieces() const;
    const QuadraticData& quadratic_data() const;
    const RadialConeData& cone_data() const;
    const RadialProfileData& profile_data() const;
    const IndicatorLinearData& indicator_data() const;
    const KinkSumData& kink_data() const;

private:
    Variant variant_ = Variant::Quadratic;
    int dim_ = 0;

    std::shared_ptr<const GridData> grid_;
    std::shared_ptr<const std::vector<PwaPiece>> pieces_;
    std::shared_ptr<const QuadraticData> quad_;
    std::shared_ptr<const RadialConeData> cone_;
    std::shared_ptr<const RadialProfileData> profile_;
    std::shared_ptr<const IndicatorLinearData> indicator_;
    std::shared_ptr<const KinkSumData> kink_;
};

// --- construction helpers ---

// Sample any variant onto a fresh grid (values +inf outside the domain).
GridData sample_to_grid(const ConvexFunction& f, const Vec& lo, const Vec& hi,
                        const std::vector<int>& shape);

// --- convexity ---

// Midpoint-convexity tolerance: 1e-9 + 1e-6 * value scale.
double convexity_tolerance(double value_scale);

// Largest violation of the variant-appropriate convexity test (0 when
// convex).  Grid: discrete midpoint convexity along axis and diagonal
// segments.  PiecewiseAffine: max-consistency across pieces.  Quadratic:
// most negative eigenvalue.
double convexity_gap(const ConvexFunction& f);
bool is_convex(const ConvexFunction& f);

// --- epi-calculus ---

// Infimal convolution, exact epi-sum of grid samples.  Both inputs are
// sampled to compatible grids; n <= 2 (use moreau_yosida for the separable
// quadratic case in higher dimension).
ConvexFunction inf_convolve(const ConvexFunction& u, const ConvexFunction& v);

// Epi-multiplication (lambda o u)(x) = lambda * u(x / lambda); exact per
// variant.
ConvexFunction epi_multiply(const ConvexFunction& u, double lambda);

ConvexFunction pointwise_max(const ConvexFunction& u, const ConvexFunction& v);
// Throws NonConvexMin when the minimum fails the convexity check.
ConvexFunction pointwise_min(const ConvexFunction& u, const ConvexFunction& v);

}  // namespace hessval
