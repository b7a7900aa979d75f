#pragma once

#include <optional>

namespace psctsa {

enum class NetLabel { PreFault, DuringFault, PostFault };

const char* to_string(NetLabel label);

/// Raw circuit reactances, all per-unit. The converter sits behind x_t
/// (series transformer), two parallel lines x_g1/x_g2 run to the infinite
/// bus, and x_gnd is the grounding reactance of a three-phase fault at the
/// sending end of line 2. x_f (converter filter) is recorded for
/// completeness; the controlled node is the PCC, so it never enters the
/// reduced transfer reactance.
struct NetworkElements {
    double x_t;
    double x_g1;
    double x_g2;
    std::optional<double> x_gnd;
    std::optional<double> x_f;
};

/// One reduced network configuration: a single equivalent transfer
/// reactance between the PCC and the infinite bus.
struct NetworkState {
    NetLabel label;
    double x_transfer;
};

/// Pre-fault: x_t in series with the two lines in parallel.
NetworkState reduce_pre(const NetworkElements& e);

/// During-fault: Kron-eliminate the grounded star node joining x_t, x_g1,
/// x_g2. With x_p = x_g1 || x_g2 the star-delta transfer branch is
/// x_t + x_p + x_t*x_p/x_gnd.
NetworkState reduce_during_fault(const NetworkElements& e);

/// Post-fault: line 2 isolated by its breakers, x_t in series with x_g1.
NetworkState reduce_post(const NetworkElements& e);

/// Timed pre -> during -> post switching sequence. `during_fault` is absent
/// for pure line-loss disturbances; `t_clear` absent means the fault is
/// never cleared; `delta0` absent defaults to the pre-fault SEP.
struct FaultScenario {
    NetworkState pre;
    std::optional<NetworkState> during_fault;
    NetworkState post;
    double t_fault = 0.0;
    std::optional<double> t_clear;
    std::optional<double> delta0;

    /// Throws DomainError on violated invariants.
    void validate() const;
};

} // namespace psctsa
