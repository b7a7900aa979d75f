#include "psctsa/report.hpp"

#include <charconv>
#include <cmath>
#include <numbers>

#include "psctsa/errors.hpp"
#include "psctsa/version.hpp"

namespace psctsa {

namespace {

using nlohmann::json;

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

json equilibria_to_json(const EquilibriaReport& r) {
    json out{{"state", to_string(r.label)},
             {"x_transfer_pu", r.x_transfer},
             {"p_max_pu", r.eq.p_max},
             {"exists", r.eq.exist()}};
    if (r.eq.exist()) {
        out["sep_rad"] = *r.eq.sep;
        out["sep_deg"] = *r.eq.sep * kDegPerRad;
        out["uep_rad"] = *r.eq.uep;
        out["uep_deg"] = *r.eq.uep * kDegPerRad;
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

json sim_report_to_json(const SimReport& report) {
    json out{{"classification", to_string(report.classification)},
             {"cycle_slips", report.cycle_slips}};
    if (report.final_delta) {
        out["final_delta_rad"] = *report.final_delta;
        out["final_delta_deg"] = *report.final_delta * kDegPerRad;
    }
    if (report.clearing_angle) {
        out["clearing_angle_rad"] = *report.clearing_angle;
        out["clearing_angle_deg"] = *report.clearing_angle * kDegPerRad;
    }
    return out;
}

std::vector<EquilibriaReport> equilibria_overview(const ScenarioConfig& cfg) {
    const FaultScenario sc = cfg.scenario();
    std::vector<EquilibriaReport> out;
    out.push_back({NetLabel::PreFault, sc.pre.x_transfer, find_equilibria(cfg.psc, sc.pre)});
    if (sc.during_fault) {
        out.push_back({NetLabel::DuringFault, sc.during_fault->x_transfer,
                       find_equilibria(cfg.psc, *sc.during_fault)});
    }
    out.push_back({NetLabel::PostFault, sc.post.x_transfer, find_equilibria(cfg.psc, sc.post)});
    return out;
}

Report base_report(const ScenarioConfig& cfg) {
    Report r;
    r.scenario_name = cfg.name;
    r.config_digest = cfg.digest;
    r.resolved = serialize_scenario(cfg);
    return r;
}

json Report::to_json() const {
    json out{{"scenario", scenario_name},
             {"resolved", resolved},
             {"provenance",
              {{"tool", "psc-tsa"},
               {"version", kVersion},
               {"config_digest", config_digest.empty() ? json() : json(config_digest)},
               {"digest_algorithm", "fnv1a64"}}}};
    if (!equilibria.empty()) {
        json eqs = json::array();
        for (const auto& e : equilibria) eqs.push_back(equilibria_to_json(e));
        out["equilibria"] = eqs;
    }
    if (cca_rad) {
        out["cca_rad"] = *cca_rad;
        out["cca_deg"] = *cca_rad * kDegPerRad;
    }
    if (cct_analytic_s) out["cct_analytic_s"] = *cct_analytic_s;
    if (cct_numeric_s) {
        out["cct_numeric_s"] = *cct_numeric_s;
        if (cct_analytic_s) {
            out["cct_abs_difference_s"] = std::abs(*cct_analytic_s - *cct_numeric_s);
        }
    }
    if (sim || sim_model) {
        json s = sim ? sim_report_to_json(*sim) : json::object();
        s["model"] = (sim_model && *sim_model == ModelKind::Sg) ? "sg" : "psc";
        out["simulation"] = s;
    }
    return out;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
    out << "t,delta_rad,delta_dot_rad_s,p_e_pu,i_g_pu\n";
    for (const auto& s : tr.samples) {
        out << format_double(s.t) << ',' << format_double(s.delta) << ','
            << format_double(s.delta_dot) << ',' << format_double(s.p_e) << ','
            << format_double(s.i_g) << '\n';
    }
    if (!out) throw IoError("failed writing trajectory CSV");
}

void write_portrait_csv(std::ostream& out, const PhasePortrait& portrait) {
    out << "delta_rad,delta_dot_rad_s\n";
    for (const auto& s : portrait.samples) {
        out << format_double(s.delta) << ',' << format_double(s.delta_dot) << '\n';
    }
    if (!out) throw IoError("failed writing portrait CSV");
}

void write_sweep_csv(std::ostream& out, std::span<const double> clear_times,
                     std::span<const SimReport> reports) {
    out << "clear_time,clearing_angle_deg,classification,cycle_slips\n";
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const SimReport& r = reports[i];
        out << format_double(clear_times[i]) << ','
            << (r.clearing_angle ? format_double(*r.clearing_angle * kDegPerRad) : "") << ','
            << to_string(r.classification) << ',' << r.cycle_slips << '\n';
    }
    if (!out) throw IoError("failed writing sweep CSV");
}

} // namespace psctsa
