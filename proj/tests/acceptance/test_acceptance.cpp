// Acceptance suite: one test case and one printed PASS/FAIL line per
// criterion. Expected values come from the bundled fixtures and the
// independent oracles in tests/support.
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include "psctsa/analytic.hpp"
#include "psctsa/errors.hpp"
#include "psctsa/scenario.hpp"
#include "psctsa/simulate.hpp"
#include "support/oracles.hpp"

using namespace psctsa;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDeg = kPi / 180.0;

struct Criterion {
    const char* id;
    bool ok = true;
    std::ostringstream notes;

    explicit Criterion(const char* id_) : id(id_) {}

    template <class T>
    void expect(bool cond, const char* what, const T& measured) {
        if (!cond) {
            ok = false;
            if (notes.tellp() > 0) notes << "; ";
            notes << what << " (measured " << measured << ")";
        }
    }
    void expect(bool cond, const char* what) { expect(cond, what, "-"); }

    void finish() {
        std::printf("[%s] criterion %s\n", ok ? "PASS" : "FAIL", id);
        if (!ok) std::printf("       %s\n", notes.str().c_str());
        std::fflush(stdout);
        CHECK_MESSAGE(ok, notes.str());
    }
};

std::string config_dir() {
    const char* dir = std::getenv("PSCTSA_CONFIG_DIR");
    REQUIRE(dir != nullptr);
    return dir;
}

std::string fixture_dir() {
    const char* dir = std::getenv("PSCTSA_FIXTURE_DIR");
    REQUIRE(dir != nullptr);
    return dir;
}

ScenarioConfig case1() { return load_scenario(config_dir() + "/case1.json"); }
ScenarioConfig case2() { return load_scenario(config_dir() + "/case2.json"); }

std::vector<double> two_pi_crossings(const Trajectory& tr) {
    std::vector<double> times;
    const double delta0 = tr.samples.front().delta;
    int n = 1;
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        const auto& a = tr.samples[i - 1];
        const auto& b = tr.samples[i];
        while (a.delta < delta0 + 2.0 * kPi * n && b.delta >= delta0 + 2.0 * kPi * n) {
            const double target = delta0 + 2.0 * kPi * n;
            times.push_back(a.t + (target - a.delta) / (b.delta - a.delta) * (b.t - a.t));
            ++n;
        }
    }
    return times;
}

} // namespace

TEST_CASE("criterion 1: test case I equilibria") {
    Criterion c("1 (case-I equilibria: 26.4 / 60.5 deg)");
    const ScenarioConfig cfg = case1();
    const FaultScenario sc = cfg.scenario();
    const Equilibria pre = find_equilibria(cfg.psc, sc.pre);
    const Equilibria post = find_equilibria(cfg.psc, sc.post);
    c.expect(pre.exist() && std::abs(*pre.sep / kDeg - 26.4) <= 0.2,
             "pre-disturbance SEP within 26.4 +/- 0.2 deg",
             pre.exist() ? *pre.sep / kDeg : -1.0);
    c.expect(post.exist() && std::abs(*post.sep / kDeg - 60.5) <= 0.2,
             "post-disturbance SEP within 60.5 +/- 0.2 deg",
             post.exist() ? *post.sep / kDeg : -1.0);
    c.finish();
}

TEST_CASE("criterion 2: test case II critical clearing angle") {
    Criterion c("2 (case-II CCA: 108 deg)");
    const ScenarioConfig cfg = case2();
    const FaultScenario sc = cfg.scenario();
    const double angle = cca(cfg.psc, sc.post) / kDeg;
    c.expect(std::abs(sc.post.x_transfer - 0.95) < 1e-12, "post-fault x = 0.95 pu",
             sc.post.x_transfer);
    c.expect(std::abs(angle - 108.0) <= 0.5, "CCA within 108 +/- 0.5 deg", angle);
    c.finish();
}

TEST_CASE("criterion 3: test case II critical clearing time") {
    Criterion c("3 (case-II CCT: 0.58 s, numeric within 2e-4 s)");
    const ScenarioConfig cfg = case2();
    FaultScenario sc = cfg.scenario();
    sc.t_clear.reset();
    const Equilibria pre = find_equilibria(cfg.psc, sc.pre);
    REQUIRE(pre.exist());
    const double analytic = cct(cfg.psc, *sc.during_fault, sc.post, *pre.sep);
    const double numeric = numeric_cct(sc, cfg.psc, 1e-4, cfg.sim);
    c.expect(std::abs(analytic - 0.58) <= 0.01, "analytic CCT within 0.58 +/- 0.01 s",
             analytic);
    c.expect(std::abs(numeric - analytic) <= 2e-4, "numeric CCT within 2e-4 s of analytic",
             std::abs(numeric - analytic));
    c.finish();
}

TEST_CASE("criterion 4: CCA is fixed by the post-fault configuration") {
    Criterion c("4 (fixed CCA under during-fault perturbations)");
    const ScenarioConfig cfg = case2();
    const double reference = cca(cfg.psc, cfg.scenario().post);
    std::mt19937_64 rng(0xacce9704);
    std::uniform_real_distribution<double> gnd(0.05, 5.0);
    std::uniform_real_distribution<double> tf(0.1, 2.0);
    bool bitwise = true;
    for (int i = 0; i < 200; ++i) {
        NetworkElements perturbed = cfg.elements;
        perturbed.x_gnd = gnd(rng);
        FaultScenario sc;
        sc.pre = reduce_pre(perturbed);
        sc.during_fault = reduce_during_fault(perturbed);
        sc.post = reduce_post(perturbed);
        sc.t_fault = tf(rng);
        const double again = cca(cfg.psc, sc.post);
        bitwise = bitwise && std::memcmp(&again, &reference, sizeof reference) == 0;
    }
    c.expect(bitwise, "CCA bitwise unchanged over 200 perturbations");
    c.finish();
}

TEST_CASE("criterion 5: type-I response is overdamped") {
    Criterion c("5 (case-I monotone delta, zero overshoot)");
    const ScenarioConfig cfg = case1();
    const FaultScenario sc = cfg.scenario();
    const Trajectory tr = integrate(sc, cfg.psc, cfg.t_end, cfg.sim);
    const double sep_post = *find_equilibria(cfg.psc, sc.post).sep;

    bool strictly_monotone = true;
    double max_delta = -1e9;
    for (std::size_t i = 1; i < tr.samples.size(); ++i) {
        if (tr.samples[i - 1].t >= sc.t_fault &&
            tr.samples[i].delta <= tr.samples[i - 1].delta) {
            strictly_monotone = false;
        }
        max_delta = std::max(max_delta, tr.samples[i].delta);
    }
    c.expect(strictly_monotone, "delta strictly increasing after the disturbance");
    c.expect(max_delta <= sep_post + 1e-4, "no overshoot past the new SEP beyond 1e-4 rad",
             max_delta - sep_post);
    const SimReport report = classify(tr, find_equilibria(cfg.psc, sc.post),
                                      cfg.sim.settle_tol, cfg.sim.settle_window);
    c.expect(report.classification == StabilityClass::ConvergedDirect,
             "classified converged-direct", to_string(report.classification));
    c.finish();
}

TEST_CASE("criterion 6: type-II outcome triplet") {
    Criterion c("6 (case-II: unbounded / slip-then-lock / direct)");
    const ScenarioConfig cfg = case2();
    const auto [a, b] = ab_coefficients(cfg.psc, *cfg.scenario().during_fault);
    const double slip = slip_period(a, b); // derived oracle: 1.45821 s

    // never cleared
    FaultScenario never = cfg.scenario();
    never.t_clear.reset();
    const Trajectory tr_never = integrate(never, cfg.psc, 9.0, cfg.sim);
    const SimReport rep_never =
        classify(tr_never, find_equilibria(cfg.psc, *never.during_fault), cfg.sim.settle_tol,
                 cfg.sim.settle_window);
    c.expect(rep_never.classification == StabilityClass::Unbounded,
             "never cleared classifies unbounded", to_string(rep_never.classification));
    const auto crossings = two_pi_crossings(tr_never);
    c.expect(crossings.size() >= 4, "at least four 2*pi crossings", crossings.size());
    for (std::size_t i = 1; i < crossings.size(); ++i) {
        c.expect(std::abs(crossings[i] - crossings[i - 1] - slip) <= 1e-3,
                 "crossing spacing equals the slip-period oracle within 1 ms",
                 crossings[i] - crossings[i - 1]);
    }

    // cleared 0.7 s after the fault (beyond the CCT)
    FaultScenario late = cfg.scenario();
    late.t_clear = late.t_fault + 0.7;
    const Trajectory tr_late = integrate(late, cfg.psc, 8.0, cfg.sim);
    const SimReport rep_late = classify(tr_late, find_equilibria(cfg.psc, late.post),
                                        cfg.sim.settle_tol, cfg.sim.settle_window);
    const double sep_post = std::asin(0.95);
    c.expect(rep_late.classification == StabilityClass::ConvergedAfterSlip &&
                 rep_late.cycle_slips == 1,
             "0.7 s clearing re-synchronizes after one slip", rep_late.cycle_slips);
    c.expect(rep_late.final_delta &&
                 std::abs(*rep_late.final_delta - (sep_post + 2.0 * kPi)) <= 2e-4,
             "locks onto the post-fault SEP + 2*pi",
             rep_late.final_delta ? *rep_late.final_delta : -1.0);

    // cleared 0.5 s after the fault (within the CCT)
    FaultScenario early = cfg.scenario(); // bundled clearing is 0.5 s
    const Trajectory tr_early = integrate(early, cfg.psc, cfg.t_end, cfg.sim);
    const SimReport rep_early = classify(tr_early, find_equilibria(cfg.psc, early.post),
                                         cfg.sim.settle_tol, cfg.sim.settle_window);
    c.expect(rep_early.classification == StabilityClass::ConvergedDirect,
             "0.5 s clearing converges directly", to_string(rep_early.classification));
    c.expect(rep_early.final_delta &&
                 std::abs(*rep_early.final_delta / kDeg - 71.8) <= 0.2,
             "settles at 71.8 +/- 0.2 deg",
             rep_early.final_delta ? *rep_early.final_delta / kDeg : -1.0);
    c.finish();
}

TEST_CASE("criterion 7: closed form vs ODE time oracle") {
    Criterion c("7 (closed-form time solution vs quadrature oracle)");
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(0xacce9707);
    std::uniform_real_distribution<double> a_dist(0.5, 25.0);
    std::uniform_real_distribution<double> ratio(0.0, 0.98);
    std::uniform_real_distribution<double> d0(-2.0 * kPi, 2.0 * kPi);
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const double a = a_dist(rng);
        const double b = a * ratio(rng);
        const double delta0 = d0(rng);
        for (int i = 1; i <= 8; ++i) {
            const double delta = delta0 + 4.0 * kPi * i / 8.0;
            const double t_closed = closed_form_time(delta, delta0, a, b);
            const double t_ode = oracles::ode_time(delta, delta0, a, b);
            worst = std::max(worst, std::abs(t_closed - t_ode));
        }
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.expect(worst <= 1e-6, "max |t_closed - t_ode| <= 1e-6 s over 200 pairs", worst);
    c.expect(elapsed <= 10.0, "runtime <= 10 s", elapsed);
    c.finish();
}

TEST_CASE("criterion 8: self-restoration beyond the CCT") {
    Criterion c("8 (50 clearings beyond CCT all re-synchronize)");
    const ScenarioConfig cfg = case2();
    FaultScenario sc = cfg.scenario();
    sc.t_clear.reset();
    const auto [a, b] = ab_coefficients(cfg.psc, *sc.during_fault);
    const double slip = slip_period(a, b);
    const double t_crit =
        cct(cfg.psc, *sc.during_fault, sc.post, *find_equilibria(cfg.psc, sc.pre).sep);

    std::mt19937_64 rng(0xacce9708);
    std::uniform_real_distribution<double> gap(1e-4, 3.0 * slip);
    std::vector<double> times;
    times.reserve(50);
    for (int i = 0; i < 50; ++i) times.push_back(t_crit + gap(rng));

    const auto reports = sweep_clearing(sc, cfg.psc, times, 18.0, cfg.sim);
    int resync = 0, unbounded = 0;
    for (const auto& r : reports) {
        if (r.classification == StabilityClass::ConvergedAfterSlip && r.cycle_slips >= 1) {
            ++resync;
        }
        if (r.classification == StabilityClass::Unbounded) ++unbounded;
    }
    c.expect(resync == 50, "all 50 classify converged-after-slip with n >= 1", resync);
    c.expect(unbounded == 0, "zero unbounded outcomes", unbounded);
    c.finish();
}

TEST_CASE("criterion 9: per-unit scale invariance") {
    Criterion c("9 (1 GW/220 kV vs 1 kW/50 V configs agree to 1e-9)");
    const ScenarioConfig giga = case2();
    const ScenarioConfig kilo = load_scenario(config_dir() + "/case2_experiment.json");

    const FaultScenario sc_g = giga.scenario();
    const FaultScenario sc_k = kilo.scenario();
    auto rel = [](double x, double y) {
        return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-30});
    };

    const Equilibria eq_g = find_equilibria(giga.psc, sc_g.post);
    const Equilibria eq_k = find_equilibria(kilo.psc, sc_k.post);
    c.expect(rel(*eq_g.sep, *eq_k.sep) <= 1e-9, "post-fault SEP matches",
             rel(*eq_g.sep, *eq_k.sep));
    c.expect(rel(cca(giga.psc, sc_g.post), cca(kilo.psc, sc_k.post)) <= 1e-9, "CCA matches",
             rel(cca(giga.psc, sc_g.post), cca(kilo.psc, sc_k.post)));

    const double pre_sep_g = *find_equilibria(giga.psc, sc_g.pre).sep;
    const double pre_sep_k = *find_equilibria(kilo.psc, sc_k.pre).sep;
    const double cct_g = cct(giga.psc, *sc_g.during_fault, sc_g.post, pre_sep_g);
    const double cct_k = cct(kilo.psc, *sc_k.during_fault, sc_k.post, pre_sep_k);
    c.expect(rel(cct_g, cct_k) <= 1e-9, "CCT matches", rel(cct_g, cct_k));

    const Trajectory tr_g = integrate(sc_g, giga.psc, giga.t_end, giga.sim);
    const Trajectory tr_k = integrate(sc_k, kilo.psc, kilo.t_end, kilo.sim);
    bool same_grid = tr_g.samples.size() == tr_k.samples.size();
    double worst = 0.0;
    if (same_grid) {
        for (std::size_t i = 0; i < tr_g.samples.size(); ++i) {
            same_grid = same_grid && tr_g.samples[i].t == tr_k.samples[i].t;
            worst = std::max(worst, rel(tr_g.samples[i].delta, tr_k.samples[i].delta));
            worst = std::max(worst, rel(tr_g.samples[i].p_e, tr_k.samples[i].p_e));
        }
    }
    c.expect(same_grid, "identical sample grids", tr_g.samples.size());
    c.expect(worst <= 1e-9, "trajectories match to 1e-9 relative", worst);
    c.finish();
}

TEST_CASE("criterion 10: SG baseline properties") {
    Criterion c("10 (SG energy, equal-area verdicts, overshoot contrast)");

    // (a) undamped energy conservation over 10 s
    const SgParams lossless{1.0, 0.03, 0.0};
    const NetworkState net{NetLabel::PostFault, 0.87};
    FaultScenario rest{net, std::nullopt, net, 0.0, std::nullopt, std::asin(0.87) - 0.3};
    const Trajectory osc = sg_integrate(rest, lossless, 1.0, 1.0, 10.0);
    const double e0 = oracles::sg_energy(osc.samples.front().delta,
                                         osc.samples.front().delta_dot, lossless.j_eff,
                                         lossless.p_m, 1.0, 1.0, net.x_transfer);
    double drift = 0.0;
    for (const auto& s : osc.samples) {
        drift = std::max(drift, std::abs(oracles::sg_energy(s.delta, s.delta_dot,
                                                            lossless.j_eff, lossless.p_m, 1.0,
                                                            1.0, net.x_transfer) -
                                         e0));
    }
    c.expect(drift <= 1e-6 * std::abs(e0), "energy drift <= 1e-6 relative over 10 s",
             drift / std::abs(e0));

    // (b) first-swing verdict vs equal-area quadrature on 20 random scenarios
    std::mt19937_64 rng(0xacce9710);
    std::uniform_real_distribution<double> x_pre_d(0.45, 0.7);
    std::uniform_real_distribution<double> x_dur_d(1.1, 2.2);
    std::uniform_real_distribution<double> x_post_d(0.75, 0.95);
    std::uniform_real_distribution<double> clear_d(0.02, 0.5);
    std::uniform_real_distribution<double> j_d(0.01, 0.05);
    int matches = 0, produced = 0, stable_count = 0;
    while (produced < 20) {
        const double x_pre = x_pre_d(rng);
        const double x_dur = x_dur_d(rng);
        const double x_post = x_post_d(rng);
        const SgParams sg{1.0, j_d(rng), 0.0};
        const double delta0 = std::asin(sg.p_m * x_pre);
        const double uep = kPi - std::asin(sg.p_m * x_post);
        FaultScenario sc{{NetLabel::PreFault, x_pre},
                         NetworkState{NetLabel::DuringFault, x_dur},
                         {NetLabel::PostFault, x_post},
                         0.1,
                         0.1 + clear_d(rng),
                         std::nullopt};
        const Trajectory swing = sg_integrate(sc, sg, 1.0, 1.0, *sc.t_clear);
        const double delta_clear = swing.samples.back().delta;
        if (delta_clear >= uep) continue;
        const double a_acc = oracles::adaptive_simpson(
            [&](double d) { return sg.p_m - std::sin(d) / x_dur; }, delta0, delta_clear,
            1e-12);
        const double a_dec = oracles::adaptive_simpson(
            [&](double d) { return std::sin(d) / x_post - sg.p_m; }, delta_clear, uep, 1e-12);
        if (std::abs(a_acc - a_dec) < 0.05 * std::max(a_acc, a_dec)) continue;
        const bool oracle_stable = a_acc <= a_dec;
        const Trajectory tr = sg_integrate(sc, sg, 1.0, 1.0, 6.0);
        double max_delta = -1e9;
        for (const auto& s : tr.samples) max_delta = std::max(max_delta, s.delta);
        const bool sim_stable = max_delta < uep;
        matches += (sim_stable == oracle_stable);
        stable_count += oracle_stable;
        ++produced;
    }
    c.expect(matches == 20, "20/20 verdicts match the equal-area oracle", matches);
    c.expect(stable_count > 0 && stable_count < 20, "both outcomes exercised", stable_count);

    // (c) overshoot contrast on the shared type-I scenario
    const ScenarioConfig cfg = case1();
    const FaultScenario shared = cfg.scenario();
    const double sep_post = *find_equilibria(cfg.psc, shared.post).sep;
    const SgParams damped{1.0, 0.0255, 0.05};
    const Trajectory sg_tr = sg_integrate(shared, damped, 1.0, 1.0, 5.0);
    double sg_max = -1e9;
    for (const auto& s : sg_tr.samples) sg_max = std::max(sg_max, s.delta);
    const Trajectory psc_tr = integrate(shared, cfg.psc, 5.0, cfg.sim);
    double psc_max = -1e9;
    for (const auto& s : psc_tr.samples) psc_max = std::max(psc_max, s.delta);
    c.expect(sg_max > sep_post + 1e-2, "SG overshoots the new SEP", sg_max - sep_post);
    c.expect(psc_max <= sep_post + 1e-4, "PSC does not overshoot", psc_max - sep_post);
    c.finish();
}

TEST_CASE("criterion 11: overcurrent guard") {
    Criterion c("11 (fixtures stay under 1.8 pu; bolted fault truncates)");

    const ScenarioConfig c1 = case1();
    const Trajectory t1 = integrate(c1.scenario(), c1.psc, c1.t_end, c1.sim);
    c.expect(!t1.event_time(EventKind::CurrentLimitHit) &&
                 !check_current_limit(t1, c1.psc.i_limit),
             "case-I run completes without a current-limit event");

    const ScenarioConfig c2 = case2();
    const Trajectory t2 = integrate(c2.scenario(), c2.psc, c2.t_end, c2.sim);
    c.expect(!t2.event_time(EventKind::CurrentLimitHit) &&
                 !check_current_limit(t2, c2.psc.i_limit),
             "case-II run completes without a current-limit event");

    const ScenarioConfig bolt = load_scenario(fixture_dir() + "/bolted_fault.json");
    const Trajectory t3 = integrate(bolt.scenario(), bolt.psc, bolt.t_end, bolt.sim);
    const SimReport rep = classify(t3, find_equilibria(bolt.psc, *bolt.scenario().during_fault),
                                   bolt.sim.settle_tol, bolt.sim.settle_window);
    c.expect(t3.event_time(EventKind::CurrentLimitHit).has_value(),
             "bolted-fault run records a current-limit event");
    c.expect(rep.classification == StabilityClass::CurrentLimited,
             "bolted-fault run classifies current-limited", to_string(rep.classification));
    c.expect(t3.samples.back().t < bolt.t_end, "trajectory truncated at the event",
             t3.samples.back().t);
    c.finish();
}
