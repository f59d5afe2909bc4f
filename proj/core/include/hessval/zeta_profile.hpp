#pragma once

#include "hessval/errors.hpp"
#include "hessval/quadrature.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace hessval {

// Weight function zeta on (0, infinity) with bounded support.  Stored as a
// piecewise-linear interpolant over strictly increasing abscissae, or as a
// closed-form handle (dense samples are kept alongside for derivative
// grids).  Integrals against power weights are evaluated in closed form on
// each linear piece; values below the smallest abscissa are never used by
// the integral machinery, which reports limits over the sampled
// refinement instead.
class ZetaProfile {
public:
    ZetaProfile() = default;

    static ZetaProfile from_samples(std::vector<double> abscissae, std::vector<double> values,
                                    double support);
    static ZetaProfile from_function(std::function<double(double)> fn, double support,
                                     int sample_count = 4096);

    // The hat profile max(0, 1 - s) on [0, 1]; exact in this representation.
    static ZetaProfile hat();

    double operator()(double s) const;
    double support_bound() const { return support_; }
    double smallest_abscissa() const { return abscissae_.empty() ? support_ : abscissae_.front(); }
    bool analytic() const { return static_cast<bool>(fn_); }

    const std::vector<double>& abscissae() const { return abscissae_; }
    const std::vector<double>& values() const { return values_; }

    // int_t^S s^p zeta(s) ds, exact per linear piece (closed-form handles
    // use adaptive quadrature split at the support bound).
    double weighted_tail(double p, double t) const;

    double max_abs() const;

    std::optional<std::pair<int, int>> claimed_class;  // (j, n) tag

private:
    std::vector<double> abscissae_;
    std::vector<double> values_;
    double support_ = 0.0;
    std::function<double(double)> fn_;
};

// eta(t) = int_t^inf s^{n-j-1} zeta(s) ds for 1 <= j <= n-1; t = 0 reports
// the limit over the sampled refinement.
double eta(const ZetaProfile& zeta, int j, int n, double t);

// rho(t) = t^{n-j} zeta(t) + (n-j) eta(t); rho(0) = (n-j) eta(0).
double rho(const ZetaProfile& zeta, int j, int n, double t);

// zeta_r: constant zeta(r) on [0, r), equal to zeta beyond.
ZetaProfile truncate_profile(const ZetaProfile& zeta, double r);

struct ClassCertificate {
    bool ok = false;
    double decay_gap = 0.0;  // worst |s^{n-j} zeta(s)| over the refinement tail
    double tail_gap = 0.0;   // last increment of the eta refinement sequence
};

// Numerical membership check for the class of admissible densities with
// index (j, n): s^{n-j} zeta(s) -> 0 and the eta tail integral converges,
// both certified on the refinement sequence {1e-1, ..., 1e-4}.
ClassCertificate certify_class(const ZetaProfile& zeta, int j, int n, double threshold = 1e-3);

}  // namespace hessval
