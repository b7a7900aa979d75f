#include "psctsa/analytic.hpp"

#include <cmath>
#include <numbers>

#include "psctsa/errors.hpp"

namespace psctsa {

namespace {

constexpr double kPi = std::numbers::pi;

// Branch index of tan(delta/2): number of poles (odd multiples of pi)
// crossed left of delta. Exactly-at-pole samples are resolved by the sign
// of the tangent (positive means the pole has not been crossed yet).
double branch_index(double delta, double tan_half) {
    const double r = (delta + kPi) / (2.0 * kPi);
    const double nearest = std::round(r);
    if (std::abs(r - nearest) < 1e-9) {
        return tan_half > 0.0 ? nearest - 1.0 : nearest;
    }
    return std::floor(r);
}

// Continuous antiderivative of 1/(a - b sin delta) for |a| > |b|, up to the
// 2/sqrt(a^2-b^2) factor: atan((a tan(delta/2) - b)/s) unwrapped across the
// tan poles. Increasing in delta for a > 0, decreasing for a < 0.
double phase_antiderivative(double delta, double a, double b, double s) {
    const double tan_half = std::tan(0.5 * delta);
    const double phi = std::atan((a * tan_half - b) / s);
    const double k = branch_index(delta, tan_half);
    return phi + (a > 0.0 ? k : -k) * kPi;
}

void require_no_equilibrium_regime(double a, double b) {
    if (!(std::abs(a) > std::abs(b))) {
        throw DomainError("closed form is valid only for |a| > |b| (no equilibria); "
                          "use the numeric integrator in the equilibria regime");
    }
}

} // namespace

Equilibria find_equilibria(const PscParams& p, const NetworkState& net) {
    if (!(net.x_transfer > 0.0)) {
        throw DomainError("find_equilibria: transfer reactance must be positive");
    }
    Equilibria eq;
    eq.p_max = p.v_mref * p.v_g / net.x_transfer;
    const double ratio = p.p_ref / eq.p_max;
    if (std::abs(ratio) <= 1.0) {
        eq.sep = std::asin(ratio);
        eq.uep = kPi - *eq.sep;
    }
    return eq;
}

PhasePortrait sample_portrait(const PscParams& p, const NetworkState& net,
                              double delta_min, double delta_max, int n) {
    if (n < 2) {
        throw DomainError("sample_portrait: need at least 2 samples");
    }
    if (!(delta_min < delta_max)) {
        throw DomainError("sample_portrait: delta_min must be below delta_max");
    }

    PhasePortrait portrait;
    portrait.net_label = net.label;
    portrait.samples.reserve(static_cast<std::size_t>(n));
    const double step = (delta_max - delta_min) / (n - 1);
    for (int i = 0; i < n; ++i) {
        const double d = delta_min + i * step;
        portrait.samples.push_back({d, psc_rhs(d, p, net)});
    }

    const auto rhs = [&](double d) { return psc_rhs(d, p, net); };
    for (int i = 0; i + 1 < n; ++i) {
        double lo = portrait.samples[i].delta;
        double hi = portrait.samples[i + 1].delta;
        double f_lo = portrait.samples[i].delta_dot;
        double f_hi = portrait.samples[i + 1].delta_dot;
        if (f_lo == 0.0) {
            // grid point exactly on a root; take it directly
            hi = lo;
        } else if (f_lo * f_hi > 0.0) {
            continue;
        }
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            const double f_mid = rhs(mid);
            if (f_mid == 0.0) {
                lo = hi = mid;
            } else if (f_lo * f_mid < 0.0) {
                hi = mid;
            } else {
                lo = mid;
                f_lo = f_mid;
            }
        }
        const double root = 0.5 * (lo + hi);
        const double h = 1e-6;
        const double slope = (rhs(root + h) - rhs(root - h)) / (2.0 * h);
        portrait.equilibria.push_back({root, slope < 0.0 ? EqKind::Sep : EqKind::Uep});
    }
    return portrait;
}

ClosedFormCoeffs closed_form_coeffs(double delta0, double a, double b) {
    require_no_equilibrium_regime(a, b);
    const double s = std::sqrt((a - b) * (a + b));
    return {a, b, -(2.0 / s) * phase_antiderivative(delta0, a, b, s), delta0};
}

double closed_form_time(double delta, double delta0, double a, double b) {
    require_no_equilibrium_regime(a, b);
    if (a > 0.0 ? delta < delta0 - 1e-12 : delta > delta0 + 1e-12) {
        throw DomainError("closed_form_time: delta lies on the wrong side of delta0 "
                          "for this flow direction");
    }
    const double s = std::sqrt((a - b) * (a + b));
    return (2.0 / s) *
           (phase_antiderivative(delta, a, b, s) - phase_antiderivative(delta0, a, b, s));
}

double cca(const PscParams& p, const NetworkState& post_net) {
    if (!(post_net.x_transfer > 0.0)) {
        throw DomainError("cca: transfer reactance must be positive");
    }
    const double ratio = p.p_ref * post_net.x_transfer / (p.v_mref * p.v_g);
    if (!(std::abs(ratio) <= 1.0)) {
        throw DomainError("cca: post-fault state has no equilibria; "
                          "the system cannot be restored by clearing");
    }
    return kPi - std::asin(ratio);
}

double cct(const PscParams& p, const NetworkState& during_net,
           const NetworkState& post_net, double delta0) {
    const auto [a, b] = ab_coefficients(p, during_net);
    if (!(a > b)) {
        throw DomainError("cct: during-fault state still has equilibria (a <= b); "
                          "clearing time is not critical");
    }
    const double clearing_angle = cca(p, post_net);
    if (delta0 > clearing_angle + 1e-12) {
        throw DomainError("cct: delta0 already beyond the critical clearing angle");
    }
    return closed_form_time(clearing_angle, delta0, a, b);
}

double slip_period(double a, double b) {
    require_no_equilibrium_regime(a, b);
    return 2.0 * kPi / std::sqrt((a - b) * (a + b));
}

} // namespace psctsa
