#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "psctsa/analytic.hpp"
#include "psctsa/scenario.hpp"
#include "psctsa/simulate.hpp"

namespace psctsa {

struct EquilibriaReport {
    NetLabel label;
    double x_transfer;
    Equilibria eq;
};

/// Machine-readable result document: resolved parameters, equilibria per
/// network state, CCA/CCT, per-run classification, and a provenance block.
struct Report {
    std::string scenario_name;
    std::string config_digest;
    nlohmann::json resolved;
    std::vector<EquilibriaReport> equilibria;
    std::optional<double> cca_rad;
    std::optional<double> cct_analytic_s;
    std::optional<double> cct_numeric_s;
    std::optional<SimReport> sim;
    std::optional<ModelKind> sim_model;

    nlohmann::json to_json() const;
};

/// Equilibria of every state in the scenario, in pre/during/post order.
std::vector<EquilibriaReport> equilibria_overview(const ScenarioConfig& cfg);

Report base_report(const ScenarioConfig& cfg);

nlohmann::json sim_report_to_json(const SimReport& report);

/// Header is fixed: t,delta_rad,delta_dot_rad_s,p_e_pu,i_g_pu
void write_trajectory_csv(std::ostream& out, const Trajectory& tr);

/// Header is fixed: delta_rad,delta_dot_rad_s
void write_portrait_csv(std::ostream& out, const PhasePortrait& portrait);

/// Header is fixed: clear_time,clearing_angle_deg,classification,cycle_slips
void write_sweep_csv(std::ostream& out, std::span<const double> clear_times,
                     std::span<const SimReport> reports);

/// Shortest round-trippable decimal form, locale-independent.
std::string format_double(double v);

} // namespace psctsa
