#include "psctsa/dynamics.hpp"

#include <cmath>

#include "psctsa/errors.hpp"

namespace psctsa {

double electrical_power(double delta, double v1, double v2, double x) {
    if (!(x > 0.0)) {
        throw DomainError("electrical_power: transfer reactance must be positive");
    }
    return v1 * v2 * std::sin(delta) / x;
}

double grid_current(double delta, double v1, double v2, double x) {
    if (!(x > 0.0)) {
        throw DomainError("grid_current: transfer reactance must be positive");
    }
    const double chord2 = v1 * v1 + v2 * v2 - 2.0 * v1 * v2 * std::cos(delta);
    return std::sqrt(std::max(chord2, 0.0)) / x;
}

double psc_rhs(double delta, const PscParams& p, const NetworkState& net) {
    return p.k * (p.p_ref - electrical_power(delta, p.v_mref, p.v_g, net.x_transfer));
}

std::pair<double, double> ab_coefficients(const PscParams& p, const NetworkState& net) {
    if (!(net.x_transfer > 0.0)) {
        throw DomainError("ab_coefficients: transfer reactance must be positive");
    }
    return {p.k * p.p_ref, p.k * p.v_mref * p.v_g / net.x_transfer};
}

AngleState sg_rhs(const AngleState& s, const SgParams& p, double v1, double v2,
                  const NetworkState& net) {
    const double p_e = electrical_power(s.delta, v1, v2, net.x_transfer);
    return {s.delta_dot, (p.p_m - p_e - p.d * s.delta_dot) / p.j_eff};
}

} // namespace psctsa
