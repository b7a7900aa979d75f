#pragma once

#include <numbers>
#include <utility>

#include "psctsa/network.hpp"

namespace psctsa {

/// Power synchronization controller parameters, per-unit convention.
/// k is the effective gain K_i * s_base [rad/s per pu power].
struct PscParams {
    double k;
    double p_ref;
    double v_mref = 1.0;
    double v_g = 1.0;
    double i_limit = 1.8;
    double omega0 = 2.0 * std::numbers::pi * 50.0; ///< nominal grid frequency [rad/s]
};

/// Synchronous-generator swing-equation parameters. j_eff houses the
/// J*omega_n product: j_eff * dd(delta) = p_m - p_e - d * d(delta).
struct SgParams {
    double p_m;
    double j_eff;
    double d = 0.0;
    double omega_n = 2.0 * std::numbers::pi * 50.0;
};

/// Unwrapped power angle and its rate. The rate is a true state for the
/// SG and an algebraic output for the PSC.
struct AngleState {
    double delta;
    double delta_dot = 0.0;
};

/// v1*v2*sin(delta)/x, the per-unit power transferred across x.
double electrical_power(double delta, double v1, double v2, double x);

/// |v1 e^{j delta} - v2| / x, the per-unit series branch current magnitude.
double grid_current(double delta, double v1, double v2, double x);

/// First-order PSC power-angle flow: k * (p_ref - p_e(delta)).
double psc_rhs(double delta, const PscParams& p, const NetworkState& net);

/// (a, b) of the flow written as delta_dot = a - b*sin(delta).
std::pair<double, double> ab_coefficients(const PscParams& p, const NetworkState& net);

/// Swing-equation right-hand side; returns (d delta, d delta_dot).
AngleState sg_rhs(const AngleState& s, const SgParams& p, double v1, double v2,
                  const NetworkState& net);

} // namespace psctsa
