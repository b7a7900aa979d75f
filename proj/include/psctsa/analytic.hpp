#pragma once

#include <optional>
#include <vector>

#include "psctsa/dynamics.hpp"
#include "psctsa/network.hpp"

namespace psctsa {

/// Equilibria of the first-order flow in [0, pi]. Both present or both
/// absent; sep + uep = pi when present. p_max is always reported.
struct Equilibria {
    std::optional<double> sep;
    std::optional<double> uep;
    double p_max = 0.0;

    bool exist() const { return sep.has_value(); }
};

enum class EqKind { Sep, Uep };

struct PortraitPoint {
    double delta;
    double delta_dot;
};

struct PortraitEquilibrium {
    double delta;
    EqKind kind;
};

/// Sampled delta_dot(delta) curve with located, classified equilibria.
struct PhasePortrait {
    NetLabel net_label;
    std::vector<PortraitPoint> samples;
    std::vector<PortraitEquilibrium> equilibria;
};

/// Coefficients of the closed-form time solution of the no-equilibrium
/// flow delta_dot = a - b*sin(delta). Valid only for |a| > |b|; c_const
/// is the integration constant fixed by t(delta0) = 0.
struct ClosedFormCoeffs {
    double a;
    double b;
    double c_const;
    double delta0;
};

Equilibria find_equilibria(const PscParams& p, const NetworkState& net);

PhasePortrait sample_portrait(const PscParams& p, const NetworkState& net,
                              double delta_min, double delta_max, int n);

ClosedFormCoeffs closed_form_coeffs(double delta0, double a, double b);

/// Time for the angle to move from delta0 to delta along the monotone
/// branch of the no-equilibrium flow. The arctan antiderivative is
/// unwrapped across the tan(delta/2) poles so t is continuous and
/// strictly monotone in delta. Throws DomainError when |a| <= |b| or
/// when delta lies on the wrong side of delta0.
double closed_form_time(double delta, double delta0, double a, double b);

/// Critical clearing angle: the post-fault UEP, pi - arcsin(p_ref*x/(v1*v2)).
/// Depends on the post-fault configuration only.
double cca(const PscParams& p, const NetworkState& post_net);

/// Critical clearing time: closed-form time from delta0 to the CCA under
/// the during-fault coefficients.
double cct(const PscParams& p, const NetworkState& during_net,
           const NetworkState& post_net, double delta0);

/// Time for one full 2*pi slip of the no-equilibrium flow: 2*pi/sqrt(a^2-b^2).
double slip_period(double a, double b);

} // namespace psctsa
