#pragma once

#include <optional>
#include <span>
#include <vector>

#include "psctsa/analytic.hpp"
#include "psctsa/dynamics.hpp"
#include "psctsa/network.hpp"

namespace psctsa {

enum class EventKind { FaultOn, FaultCleared, CurrentLimitHit };

const char* to_string(EventKind kind);

struct TrajectoryEvent {
    double t;
    EventKind kind;
};

enum class ModelKind { Psc, Sg };

struct TrajectorySample {
    double t;
    double delta;     ///< unwrapped [rad]
    double delta_dot; ///< [rad/s]
    double p_e;       ///< [pu]
    double i_g;       ///< [pu]
};

struct Trajectory {
    ModelKind model = ModelKind::Psc;
    std::vector<TrajectorySample> samples;
    std::vector<TrajectoryEvent> events;

    std::optional<double> event_time(EventKind kind) const;
    /// Sample value of delta at time t (t must be a recorded sample time).
    double delta_at(double t) const;
};

enum class StabilityClass { ConvergedDirect, ConvergedAfterSlip, Unbounded, CurrentLimited };

const char* to_string(StabilityClass c);

struct SimReport {
    StabilityClass classification;
    std::optional<double> final_delta;
    std::optional<double> clearing_angle;
    int cycle_slips = 0;
};

struct SimOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;     ///< [rad]
    double sample_dt = 0.0;     ///< 0 = auto from horizon
    double settle_tol = 1e-4;   ///< [rad]
    double settle_window = 0.2; ///< [s] settling must be sustained this long
};

/// Default classification horizon: t_clear (or t_fault) plus ten
/// synchronization time constants of the post-fault state.
double default_horizon(const FaultScenario& sc, const PscParams& p);

/// Event-driven adaptive integration of the PSC flow across the fault
/// sequence. Network switches are step boundaries: the integrator stops
/// exactly at t_fault and t_clear and restarts with continuous delta.
/// While the disturbance is uncleared, the run is truncated at the first
/// sample whose i_g exceeds p.i_limit (CurrentLimitHit event).
Trajectory integrate(const FaultScenario& sc, const PscParams& p, double t_end,
                     const SimOptions& opt = {});

/// Stability classification of a finished trajectory against the
/// equilibria of its terminal network state. Throws InconclusiveError
/// when the end state is neither settled nor advancing.
SimReport classify(const Trajectory& tr, const Equilibria& post_eq,
                   double settle_tol = 1e-4, double settle_window = 0.2);

/// Numeric CCT by bisection on the clearing time: a clearing time is
/// within the CCT iff the angle at clearing does not exceed the CCA.
/// Each probe is an independent adaptive integration of the during-fault
/// flow; the analytic closed form is never consulted.
double numeric_cct(const FaultScenario& sc, const PscParams& p, double time_tol,
                   const SimOptions& opt = {});

/// One integrate+classify run per clearing time (seconds after t_fault),
/// reports in input order. horizon_after_clear <= 0 selects the default.
std::vector<SimReport> sweep_clearing(const FaultScenario& sc, const PscParams& p,
                                      std::span<const double> clear_times,
                                      double horizon_after_clear = 0.0,
                                      const SimOptions& opt = {});

/// Swing-equation counterpart of integrate() with the same event
/// discipline; delta_dot is the true rotor-speed state. The SG baseline
/// carries no converter current limit, so nothing is truncated.
Trajectory sg_integrate(const FaultScenario& sc, const SgParams& p, double v1, double v2,
                        double t_end, const SimOptions& opt = {});

/// First sample time at which i_g exceeds i_limit, scanning the whole
/// trajectory.
std::optional<double> check_current_limit(const Trajectory& tr, double i_limit);

} // namespace psctsa
