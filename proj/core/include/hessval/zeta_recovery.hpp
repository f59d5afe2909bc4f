#pragma once

#include "hessval/zeta_profile.hpp"

namespace hessval {

struct RecoveryResult {
    ZetaProfile zeta;
    double decay_certificate = 0.0;  // |t^{n-1} zeta(t)| at the end of the refinement, scaled
    double tail_certificate = 0.0;   // settling of int_t r^{n-2} zeta(r) dr
    double limit_certificate = 0.0;  // |t^{n-1} int_t Z(u_r)/r^n dr - Z(u_0)/(n-1)|, scaled
};

// Solves the cone-value integral equation
//   zeta(t) = Z(t) / (omega_n t^{n-1}) - (n-1)/omega_n int_t^inf Z(r)/r^n dr
// for the profile t -> Z(u_t) given as compactly supported samples, and
// certifies the recovered profile's class conditions on the refinement
// sequence {1e-1, ..., 1e-4}.  Throws ClassViolation when a certificate
// exceeds the threshold.
RecoveryResult recover_zeta_from_cone_values(const ZetaProfile& cone_values, int n,
                                             double threshold = 1e-3);

// Synthesizes Z(u_t) = omega_n (t^{n-1} zeta(t) + (n-1) eta_1(t)) from a
// degree-1 profile; inverse of the recovery above.
ZetaProfile synthesize_cone_values(const ZetaProfile& zeta, int n, int nodes = 4096);

}  // namespace hessval
