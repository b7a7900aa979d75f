#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "psctsa/analytic.hpp"
#include "psctsa/errors.hpp"
#include "psctsa/report.hpp"
#include "psctsa/scenario.hpp"
#include "psctsa/simulate.hpp"
#include "psctsa/svg.hpp"
#include "psctsa/version.hpp"

namespace fs = std::filesystem;
using namespace psctsa;

namespace {

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

// Exit codes: 0 ok, 1 usage, 2 config/schema, 3 domain, 4 I/O, 5 numerical.
enum ExitCode { kOk = 0, kUsage = 1, kConfig = 2, kDomain = 3, kIo = 4, kNumeric = 5 };

struct CommonArgs {
    std::string config_path;
    std::string out_base;
    bool svg = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_svg = true) {
    cmd->add_option("--config", args.config_path, "scenario config file (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out_base, "output base path (extension added per file)");
    if (with_svg) {
        cmd->add_flag("--svg", args.svg, "also emit SVG plots");
    }
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open output file: " + path.string());
    }
    return out;
}

void write_json_report(const Report& report, const fs::path& path) {
    auto out = open_out(path);
    out << report.to_json().dump(2) << '\n';
    if (!out) throw IoError("failed writing report: " + path.string());
}

const NetworkState& terminal_state(const FaultScenario& sc, double t_end) {
    if (sc.t_clear && *sc.t_clear <= t_end) return sc.post;
    if (sc.t_fault < t_end) return sc.during_fault ? *sc.during_fault : sc.post;
    return sc.pre;
}

std::string fmt_deg(double rad) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << rad * kDegPerRad << " deg";
    return os.str();
}

void print_equilibria(const std::vector<EquilibriaReport>& eqs) {
    for (const auto& e : eqs) {
        std::cout << "  " << std::left << std::setw(7) << to_string(e.label)
                  << " x = " << std::setprecision(6) << e.x_transfer
                  << " pu, p_max = " << e.eq.p_max << " pu";
        if (e.eq.exist()) {
            std::cout << ", SEP = " << fmt_deg(*e.eq.sep) << " (" << std::setprecision(6)
                      << *e.eq.sep << " rad), UEP = " << fmt_deg(*e.eq.uep) << " ("
                      << *e.eq.uep << " rad)";
        } else {
            std::cout << ", no equilibria";
        }
        std::cout << '\n';
    }
}

int cmd_equilibria(const CommonArgs& args) {
    const ScenarioConfig cfg = load_scenario(args.config_path);
    Report report = base_report(cfg);
    report.equilibria = equilibria_overview(cfg);
    std::cout << "equilibria for '" << cfg.name << "':\n";
    print_equilibria(report.equilibria);
    if (!args.out_base.empty()) {
        write_json_report(report, fs::path(args.out_base).replace_extension(".json"));
    }
    return kOk;
}

int cmd_cca(const CommonArgs& args) {
    const ScenarioConfig cfg = load_scenario(args.config_path);
    const FaultScenario sc = cfg.scenario();
    Report report = base_report(cfg);
    report.cca_rad = cca(cfg.psc, sc.post);
    std::cout << "CCA = " << fmt_deg(*report.cca_rad) << " (" << std::setprecision(8)
              << *report.cca_rad << " rad), fixed by the post-fault configuration\n";
    if (!args.out_base.empty()) {
        write_json_report(report, fs::path(args.out_base).replace_extension(".json"));
    }
    return kOk;
}

int cmd_cct(const CommonArgs& args, std::optional<double> delta0_deg, double time_tol) {
    ScenarioConfig cfg = load_scenario(args.config_path);
    if (delta0_deg) {
        cfg.delta0 = *delta0_deg / kDegPerRad;
    }
    const FaultScenario sc = cfg.scenario();
    if (!sc.during_fault) {
        throw DomainError("cct needs a fault scenario with a during-fault state");
    }
    const Equilibria pre_eq = find_equilibria(cfg.psc, sc.pre);
    const double delta0 = sc.delta0 ? *sc.delta0
                          : pre_eq.exist()
                              ? *pre_eq.sep
                              : throw DomainError("no pre-fault SEP; give --delta0-deg");

    Report report = base_report(cfg);
    report.cca_rad = cca(cfg.psc, sc.post);
    const auto [a, b] = ab_coefficients(cfg.psc, *sc.during_fault);
    report.cct_analytic_s = cct(cfg.psc, *sc.during_fault, sc.post, delta0);
    report.cct_numeric_s = numeric_cct(sc, cfg.psc, time_tol, cfg.sim);

    std::cout << "CCA          = " << fmt_deg(*report.cca_rad) << '\n'
              << "CCT analytic = " << std::setprecision(6) << *report.cct_analytic_s
              << " s  (delta0 = " << fmt_deg(delta0) << ", a = " << a << ", b = " << b
              << ")\n"
              << "CCT numeric  = " << *report.cct_numeric_s << " s  (bisection, +/- "
              << time_tol << " s)\n"
              << "difference   = " << std::abs(*report.cct_analytic_s - *report.cct_numeric_s)
              << " s\n";
    if (!args.out_base.empty()) {
        write_json_report(report, fs::path(args.out_base).replace_extension(".json"));
    }
    return kOk;
}

void write_trajectory_svgs(const Trajectory& tr, const std::string& base) {
    const struct {
        const char* suffix;
        const char* title;
        const char* y_label;
        double TrajectorySample::* field;
        double unit_scale;
    } plots[] = {
        {"_delta.svg", "Power angle", "delta [deg]", &TrajectorySample::delta, kDegPerRad},
        {"_pe.svg", "Active power", "P_e [pu]", &TrajectorySample::p_e, 1.0},
        {"_ig.svg", "Grid current", "i_g [pu]", &TrajectorySample::i_g, 1.0},
    };
    for (const auto& p : plots) {
        PlotSeries series;
        series.label = p.y_label;
        series.points.reserve(tr.samples.size());
        for (const auto& s : tr.samples) {
            series.points.emplace_back(s.t, s.*(p.field) * p.unit_scale);
        }
        auto out = open_out(base + p.suffix);
        write_line_plot(out, p.title, "t [s]", p.y_label, {series});
    }
}

int cmd_simulate(const CommonArgs& args, std::optional<double> clear_at, bool no_clear,
                 std::optional<double> t_end_override, const std::string& model) {
    ScenarioConfig cfg = load_scenario(args.config_path);
    if (no_clear) {
        cfg.t_clear.reset();
    }
    if (clear_at) {
        if (cfg.fault_kind != FaultKind::ThreePhaseGroundFault) {
            throw DomainError("--clear-at applies to ground-fault scenarios only");
        }
        cfg.t_clear = cfg.t_fault + *clear_at;
    }
    const double t_end = t_end_override.value_or(cfg.t_end);
    const FaultScenario sc = cfg.scenario();

    Report report = base_report(cfg);
    report.equilibria = equilibria_overview(cfg);

    Trajectory tr;
    if (model == "sg") {
        tr = sg_integrate(sc, cfg.sg, cfg.psc.v_mref, cfg.psc.v_g, t_end, cfg.sim);
        report.sim_model = ModelKind::Sg;
        std::cout << "SG run: " << tr.samples.size() << " samples, final delta = "
                  << fmt_deg(tr.samples.back().delta) << '\n';
    } else {
        tr = integrate(sc, cfg.psc, t_end, cfg.sim);
        const Equilibria eq = find_equilibria(cfg.psc, terminal_state(sc, t_end));
        const SimReport sim = classify(tr, eq, cfg.sim.settle_tol, cfg.sim.settle_window);
        report.sim = sim;
        report.sim_model = ModelKind::Psc;
        std::cout << "PSC run: " << to_string(sim.classification);
        if (sim.final_delta) std::cout << ", final delta = " << fmt_deg(*sim.final_delta);
        if (sim.clearing_angle) {
            std::cout << ", clearing angle = " << fmt_deg(*sim.clearing_angle);
        }
        std::cout << ", cycle slips = " << sim.cycle_slips << '\n';
    }

    if (!args.out_base.empty()) {
        auto csv = open_out(args.out_base + ".csv");
        write_trajectory_csv(csv, tr);
        write_json_report(report, args.out_base + ".json");
        if (args.svg) {
            write_trajectory_svgs(tr, args.out_base);
        }
        std::cout << "wrote " << args.out_base << ".csv / .json"
                  << (args.svg ? " / _delta.svg / _pe.svg / _ig.svg" : "") << '\n';
    }
    return kOk;
}

int cmd_portrait(const CommonArgs& args, const std::string& state, double min_deg,
                 double max_deg, int n) {
    const ScenarioConfig cfg = load_scenario(args.config_path);
    const FaultScenario sc = cfg.scenario();
    const NetworkState* net = nullptr;
    if (state == "pre") {
        net = &sc.pre;
    } else if (state == "during") {
        if (!sc.during_fault) throw DomainError("scenario has no during-fault state");
        net = &*sc.during_fault;
    } else {
        net = &sc.post;
    }

    const PhasePortrait portrait =
        sample_portrait(cfg.psc, *net, min_deg / kDegPerRad, max_deg / kDegPerRad, n);
    std::cout << "portrait of the " << to_string(net->label) << " state: "
              << portrait.samples.size() << " samples, " << portrait.equilibria.size()
              << " equilibria\n";
    for (const auto& eq : portrait.equilibria) {
        std::cout << "  " << (eq.kind == EqKind::Sep ? "SEP" : "UEP") << " at "
                  << fmt_deg(eq.delta) << '\n';
    }

    if (!args.out_base.empty()) {
        auto csv = open_out(args.out_base + ".csv");
        write_portrait_csv(csv, portrait);
        if (args.svg) {
            PlotSeries series;
            series.label = std::string("delta_dot, ") + to_string(net->label);
            for (const auto& s : portrait.samples) {
                series.points.emplace_back(s.delta * kDegPerRad, s.delta_dot);
            }
            std::vector<PlotMarker> markers;
            for (const auto& eq : portrait.equilibria) {
                markers.push_back({eq.delta * kDegPerRad, 0.0, eq.kind == EqKind::Sep});
            }
            auto svg = open_out(args.out_base + ".svg");
            write_line_plot(svg, "Phase portrait", "delta [deg]", "delta_dot [rad/s]",
                            {series}, markers);
        }
        std::cout << "wrote " << args.out_base << ".csv" << (args.svg ? " / .svg" : "")
                  << '\n';
    }
    return kOk;
}

int cmd_sweep(const CommonArgs& args, double clear_from, double clear_to, int steps) {
    const ScenarioConfig cfg = load_scenario(args.config_path);
    if (cfg.fault_kind != FaultKind::ThreePhaseGroundFault) {
        throw DomainError("sweep applies to ground-fault scenarios only");
    }
    const FaultScenario sc = cfg.scenario();
    if (steps < 1) throw DomainError("sweep needs at least one step");
    if (!(clear_from > 0.0) || !(clear_to >= clear_from)) {
        throw DomainError("sweep needs 0 < clear-from <= clear-to");
    }

    std::vector<double> times(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        times[static_cast<std::size_t>(i)] =
            steps == 1 ? clear_from
                       : clear_from + (clear_to - clear_from) * i / (steps - 1);
    }

    const Equilibria post_eq = find_equilibria(cfg.psc, sc.post);
    std::vector<SimReport> reports;
    reports.reserve(times.size());
    for (const double tc : times) {
        FaultScenario run = sc;
        run.t_clear = sc.t_fault + tc;
        double tail = default_horizon(run, cfg.psc) - *run.t_clear;
        // Clearing close to the CCT parks the state near the post-fault UEP;
        // extend the horizon until the run classifies.
        for (int attempt = 0;; ++attempt) {
            try {
                const Trajectory tr = integrate(run, cfg.psc, *run.t_clear + tail, cfg.sim);
                reports.push_back(
                    classify(tr, post_eq, cfg.sim.settle_tol, cfg.sim.settle_window));
                break;
            } catch (const InconclusiveError&) {
                if (attempt >= 6) throw;
                tail *= 2.0;
            }
        }
    }

    int direct = 0, slipped = 0, unbounded = 0, limited = 0;
    for (const auto& r : reports) {
        switch (r.classification) {
        case StabilityClass::ConvergedDirect: ++direct; break;
        case StabilityClass::ConvergedAfterSlip: ++slipped; break;
        case StabilityClass::Unbounded: ++unbounded; break;
        case StabilityClass::CurrentLimited: ++limited; break;
        }
    }
    std::cout << "sweep over [" << clear_from << ", " << clear_to << "] s (" << steps
              << " points): " << direct << " direct, " << slipped << " after-slip, "
              << unbounded << " unbounded, " << limited << " current-limited\n";

    if (!args.out_base.empty()) {
        auto csv = open_out(args.out_base + ".csv");
        write_sweep_csv(csv, times, reports);
        std::cout << "wrote " << args.out_base << ".csv\n";
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transient stability analysis of a grid-connected converter under "
                 "power synchronization control"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonArgs eq_args;
    auto* eq_cmd = app.add_subcommand("equilibria", "SEP/UEP and p_max per network state");
    add_common(eq_cmd, eq_args, false);

    CommonArgs cca_args;
    auto* cca_cmd = app.add_subcommand("cca", "critical clearing angle (post-fault UEP)");
    add_common(cca_cmd, cca_args, false);

    CommonArgs cct_args;
    std::optional<double> cct_delta0_deg;
    double cct_time_tol = 1e-4;
    auto* cct_cmd = app.add_subcommand("cct", "critical clearing time, analytic + numeric");
    add_common(cct_cmd, cct_args, false);
    cct_cmd->add_option("--delta0-deg", cct_delta0_deg, "override the initial power angle");
    cct_cmd->add_option("--time-tol", cct_time_tol, "bisection tolerance [s]")
        ->check(CLI::PositiveNumber);

    CommonArgs sim_args;
    std::optional<double> sim_clear_at;
    std::optional<double> sim_t_end;
    bool sim_no_clear = false;
    std::string sim_model = "psc";
    auto* sim_cmd = app.add_subcommand("simulate", "time-domain run across the fault sequence");
    add_common(sim_cmd, sim_args);
    sim_cmd->add_option("--clear-at", sim_clear_at,
                        "clearing time as duration after the fault [s]");
    sim_cmd->add_flag("--no-clear", sim_no_clear, "drop the configured clearing");
    sim_cmd->add_option("--t-end", sim_t_end, "override the simulation horizon [s]");
    sim_cmd->add_option("--model", sim_model, "psc (default) or sg")
        ->check(CLI::IsMember({"psc", "sg"}));

    CommonArgs sg_args;
    std::optional<double> sg_clear_at;
    std::optional<double> sg_t_end;
    bool sg_no_clear = false;
    auto* sg_cmd = app.add_subcommand("sg-simulate", "swing-equation baseline run");
    add_common(sg_cmd, sg_args);
    sg_cmd->add_option("--clear-at", sg_clear_at,
                       "clearing time as duration after the fault [s]");
    sg_cmd->add_flag("--no-clear", sg_no_clear, "drop the configured clearing");
    sg_cmd->add_option("--t-end", sg_t_end, "override the simulation horizon [s]");

    CommonArgs portrait_args;
    std::string portrait_state = "post";
    double portrait_min_deg = 0.0;
    double portrait_max_deg = 360.0;
    int portrait_n = 1001;
    auto* portrait_cmd = app.add_subcommand("portrait", "phase portrait of one network state");
    add_common(portrait_cmd, portrait_args);
    portrait_cmd->add_option("--state", portrait_state, "pre, during or post")
        ->check(CLI::IsMember({"pre", "during", "post"}));
    portrait_cmd->add_option("--min-deg", portrait_min_deg, "lower angle bound [deg]");
    portrait_cmd->add_option("--max-deg", portrait_max_deg, "upper angle bound [deg]");
    portrait_cmd->add_option("--n", portrait_n, "number of samples")->check(CLI::Range(2, 1000000));

    CommonArgs sweep_args;
    double sweep_from = 0.0, sweep_to = 0.0;
    int sweep_steps = 0;
    auto* sweep_cmd = app.add_subcommand("sweep", "classification over a clearing-time grid");
    add_common(sweep_cmd, sweep_args, false);
    sweep_cmd->add_option("--clear-from", sweep_from, "first clearing duration [s]")->required();
    sweep_cmd->add_option("--clear-to", sweep_to, "last clearing duration [s]")->required();
    sweep_cmd->add_option("--steps", sweep_steps, "number of grid points")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (eq_cmd->parsed()) return cmd_equilibria(eq_args);
        if (cca_cmd->parsed()) return cmd_cca(cca_args);
        if (cct_cmd->parsed()) return cmd_cct(cct_args, cct_delta0_deg, cct_time_tol);
        if (sim_cmd->parsed()) {
            return cmd_simulate(sim_args, sim_clear_at, sim_no_clear, sim_t_end, sim_model);
        }
        if (sg_cmd->parsed()) {
            return cmd_simulate(sg_args, sg_clear_at, sg_no_clear, sg_t_end, "sg");
        }
        if (portrait_cmd->parsed()) {
            return cmd_portrait(portrait_args, portrait_state, portrait_min_deg,
                                portrait_max_deg, portrait_n);
        }
        if (sweep_cmd->parsed()) {
            return cmd_sweep(sweep_args, sweep_from, sweep_to, sweep_steps);
        }
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kDomain;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kIo;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kUsage;
}
