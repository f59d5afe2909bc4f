#include "hessval/zeta_profile.hpp"

#include "hessval/constants.hpp"

#include <algorithm>
#include <cmath>

namespace hessval {

ZetaProfile ZetaProfile::from_samples(std::vector<double> abscissae, std::vector<double> values,
                                      double support) {
    if (abscissae.size() != values.size() || abscissae.empty())
        throw Error("ZetaProfile: abscissae/values size mismatch");
    if (support <= 0.0) throw Error("ZetaProfile: support bound must be positive");
    for (std::size_t i = 0; i < abscissae.size(); ++i) {
        if (abscissae[i] <= 0.0) throw Error("ZetaProfile: abscissae must be > 0");
        if (i > 0 && abscissae[i] <= abscissae[i - 1])
            throw Error("ZetaProfile: abscissae must be strictly increasing");
    }
    ZetaProfile z;
    // Drop samples beyond the support bound and close the profile at S.
    while (!abscissae.empty() && abscissae.back() > support) {
        abscissae.pop_back();
        values.pop_back();
    }
    if (abscissae.empty() || abscissae.back() < support) {
        abscissae.push_back(support);
        values.push_back(0.0);
    } else {
        values.back() = 0.0;  // continuity at the support bound
    }
    z.abscissae_ = std::move(abscissae);
    z.values_ = std::move(values);
    z.support_ = support;
    return z;
}

ZetaProfile ZetaProfile::from_function(std::function<double(double)> fn, double support,
                                       int sample_count) {
    if (support <= 0.0) throw Error("ZetaProfile: support bound must be positive");
    // Log-spaced nodes near zero, uniform beyond; captures singular behaviour
    // at the origin without ever sampling s = 0.
    std::vector<double> s, v;
    const double s_min = support * 1e-7;
    const int n_log = sample_count / 4;
    const int n_lin = sample_count - n_log;
    for (int i = 0; i < n_log; ++i)
        s.push_back(s_min * std::pow(support * 0.01 / s_min, double(i) / n_log));
    for (int i = 0; i <= n_lin; ++i) s.push_back(support * 0.01 + (support - support * 0.01) * i / n_lin);
    s.erase(std::unique(s.begin(), s.end()), s.end());
    for (double si : s) v.push_back(si >= support ? 0.0 : fn(si));
    ZetaProfile z = from_samples(std::move(s), std::move(v), support);
    z.fn_ = std::move(fn);
    return z;
}

ZetaProfile ZetaProfile::hat() {
    return from_samples({1e-12, 1.0}, {1.0 - 1e-12, 0.0}, 1.0);
}

double ZetaProfile::operator()(double s) const {
    if (s >= support_) return 0.0;
    if (fn_) return fn_(s);
    if (s <= abscissae_.front()) return values_.front();  // clamp below smallest sample
    auto it = std::upper_bound(abscissae_.begin(), abscissae_.end(), s);
    std::size_t i = static_cast<std::size_t>(it - abscissae_.begin()) - 1;
    if (i + 1 >= abscissae_.size()) return values_.back();
    double t = (s - abscissae_[i]) / (abscissae_[i + 1] - abscissae_[i]);
    return (1.0 - t) * values_[i] + t * values_[i + 1];
}

namespace {

// int_a^b s^q ds with the logarithmic special case.
double power_integral(double q, double a, double b) {
    if (std::abs(q + 1.0) < 1e-14) return std::log(b / a);
    return (std::pow(b, q + 1.0) - std::pow(a, q + 1.0)) / (q + 1.0);
}

}  // namespace

double ZetaProfile::weighted_tail(double p, double t) const {
    const double lo = std::max(t, smallest_abscissa());
    if (lo >= support_) return 0.0;
    if (fn_) {
        QuadratureTol tol;
        return integrate_1d([&](double s) { return std::pow(s, p) * fn_(s); }, lo, support_, tol);
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < abscissae_.size(); ++i) {
        double a = abscissae_[i], b = abscissae_[i + 1];
        if (b <= lo) continue;
        double va = values_[i], vb = values_[i + 1];
        if (a < lo) {
            va = va + (vb - va) * (lo - a) / (b - a);
            a = lo;
        }
        // zeta on [a, b] is alpha + beta s
        double beta = (vb - va) / (b - a);
        double alpha = va - beta * a;
        total += alpha * power_integral(p, a, b) + beta * power_integral(p + 1.0, a, b);
    }
    return total;
}

double ZetaProfile::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double eta(const ZetaProfile& zeta, int j, int n, double t) {
    if (j < 1 || j > n - 1) throw IndexOutOfRange("eta: need 1 <= j <= n-1");
    if (t < 0.0) throw Error("eta: t must be >= 0");
    const double p = n - j - 1;
    const double s0 = zeta.smallest_abscissa();
    if (t < s0) {
        // Limit over the sampled refinement.  A divergent tail shows up as
        // dyadic mass growing toward the origin.
        double total = zeta.weighted_tail(p, s0);
        if (4.0 * s0 < zeta.support_bound()) {
            double m1 = std::abs(total - zeta.weighted_tail(p, 2.0 * s0));
            double m2 =
                std::abs(zeta.weighted_tail(p, 2.0 * s0) - zeta.weighted_tail(p, 4.0 * s0));
            if (m1 > 1.25 * m2 + 1e-12 && m1 > 1e-3 * (std::abs(total) + 1e-12))
                throw ClassViolation("eta: tail integral diverges as t -> 0");
        }
        return total;
    }
    return zeta.weighted_tail(p, t);
}

double rho(const ZetaProfile& zeta, int j, int n, double t) {
    if (t >= zeta.support_bound()) return 0.0;
    if (t <= zeta.smallest_abscissa()) return (n - j) * eta(zeta, j, n, t);  // rho(0) limit
    return std::pow(t, n - j) * zeta(t) + (n - j) * eta(zeta, j, n, t);
}

ZetaProfile truncate_profile(const ZetaProfile& zeta, double r) {
    if (r <= 0.0) throw Error("truncate_profile: r must be > 0");
    const double S = zeta.support_bound();
    const double zr = r >= S ? 0.0 : zeta(r);
    std::vector<double> s, v;
    const double s0 = 1e-12;
    s.push_back(s0);
    v.push_back(zr);
    if (r < S) {
        s.push_back(r);
        v.push_back(zr);
        for (std::size_t i = 0; i < zeta.abscissae().size(); ++i) {
            double a = zeta.abscissae()[i];
            if (a > r + 1e-15 && a <= S) {
                s.push_back(a);
                v.push_back(zeta.values()[i]);
            }
        }
    }
    ZetaProfile out = ZetaProfile::from_samples(std::move(s), std::move(v), S);
    out.claimed_class = zeta.claimed_class;
    return out;
}

ClassCertificate certify_class(const ZetaProfile& zeta, int j, int n, double threshold) {
    if (j < 1 || j > n - 1) throw IndexOutOfRange("certify_class: need 1 <= j <= n-1");
    ClassCertificate cert;
    const double S = zeta.support_bound();
    const double s0 = zeta.smallest_abscissa();
    std::vector<double> refinement;
    for (double t : {1e-1, 1e-2, 1e-3, 1e-4}) refinement.push_back(std::max(t * S, s0));

    // reference scale away from the singularity
    double upper = 1e-12;
    for (int k = 0; k <= 64; ++k) upper = std::max(upper, std::abs(zeta(S * (0.01 + 0.99 * k / 64.0))));
    upper += 1.0;

    // s^{n-j} zeta(s) must decay along the refinement: either the sequence
    // shrinks from step to step or it is already negligible.
    std::vector<double> decay;
    for (double t : refinement) decay.push_back(std::abs(std::pow(t, n - j) * zeta(t)));
    bool decay_trend = true;
    for (std::size_t k = 0; k + 1 < decay.size(); ++k)
        decay_trend &= decay[k + 1] <= 0.95 * decay[k] + 1e-12 * upper;
    cert.decay_gap = decay.back() / upper;
    bool decay_ok = decay_trend || cert.decay_gap <= threshold;

    // the eta integral converges: its refinement increments shrink
    std::vector<double> incr;
    for (std::size_t k = 0; k + 1 < refinement.size(); ++k)
        incr.push_back(std::abs(zeta.weighted_tail(n - j - 1, refinement[k + 1]) -
                                zeta.weighted_tail(n - j - 1, refinement[k])));
    bool tail_trend = true;
    for (std::size_t k = 0; k + 1 < incr.size(); ++k)
        tail_trend &= incr[k + 1] <= 0.95 * incr[k] + 1e-12 * upper;
    cert.tail_gap = incr.back() / upper;
    bool tail_ok = tail_trend || cert.tail_gap <= threshold;

    cert.ok = decay_ok && tail_ok;
    return cert;
}

}  // namespace hessval
