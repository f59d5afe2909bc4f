#include "hessval/zeta_recovery.hpp"

#include "hessval/constants.hpp"

#include <algorithm>
#include <cmath>

namespace hessval {

RecoveryResult recover_zeta_from_cone_values(const ZetaProfile& Z, int n, double threshold) {
    if (n < 2) throw Error("recover_zeta_from_cone_values: need n >= 2");
    const double wn = unit_sphere_measure(n);
    const double S = Z.support_bound();
    const double scale = std::max(Z.max_abs(), 1e-12);

    // Z(u_0) by linear extrapolation of the two smallest samples.
    double Z0;
    {
        const auto& s = Z.abscissae();
        const auto& v = Z.values();
        if (s.size() >= 2) {
            Z0 = v[0] - s[0] * (v[1] - v[0]) / (s[1] - s[0]);
        } else {
            Z0 = v.empty() ? 0.0 : v[0];
        }
    }

    // zeta on the sample abscissae of Z.
    std::vector<double> ts = Z.abscissae();
    std::vector<double> zs(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        double t = ts[i];
        double tail = Z.weighted_tail(-double(n), t);
        zs[i] = Z(t) / (wn * std::pow(t, n - 1)) - (n - 1) / wn * tail;
    }
    RecoveryResult out;
    out.zeta = ZetaProfile::from_samples(std::move(ts), std::move(zs), S);
    out.zeta.claimed_class = std::make_pair(1, n);

    // Certificates along the refinement sequence.
    const double s0 = out.zeta.smallest_abscissa();
    std::vector<double> refinement;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) refinement.push_back(std::max(t, s0));

    double t_last = refinement.back();
    out.decay_certificate =
        std::abs(std::pow(t_last, n - 1) * out.zeta(t_last)) * wn / scale;

    double tail_a = out.zeta.weighted_tail(n - 2, refinement[refinement.size() - 2]);
    double tail_b = out.zeta.weighted_tail(n - 2, t_last);
    out.tail_certificate = std::abs(tail_b - tail_a);  // raw increment of the refinement

    out.limit_certificate =
        std::abs(std::pow(t_last, n - 1) * Z.weighted_tail(-double(n), t_last) - Z0 / (n - 1)) /
        scale;

    if (out.decay_certificate > threshold || out.tail_certificate > threshold ||
        out.limit_certificate > threshold)
        throw ClassViolation("recover_zeta_from_cone_values: certification failed");
    return out;
}

ZetaProfile synthesize_cone_values(const ZetaProfile& zeta, int n, int nodes) {
    const double S = zeta.support_bound();
    std::vector<double> ts, vs;
    const double t_min = S * 1e-7;  // dense near 0 regardless of where zeta's samples start
    const int n_log = nodes / 4;
    const int n_lin = nodes - n_log;
    for (int i = 0; i < n_log; ++i)
        ts.push_back(t_min * std::pow(S * 0.01 / t_min, double(i) / n_log));
    for (int i = 0; i <= n_lin; ++i) ts.push_back(S * 0.01 + (S - S * 0.01) * i / n_lin);
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    const double wn = unit_sphere_measure(n);
    for (double t : ts)
        vs.push_back(wn * (std::pow(t, n - 1) * zeta(t) + (n - 1) * eta(zeta, 1, n, t)));
    return ZetaProfile::from_samples(std::move(ts), std::move(vs), S);
}

}  // namespace hessval
