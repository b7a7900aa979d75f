#include "psctsa/simulate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "psctsa/errors.hpp"

namespace psctsa {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRateSettleTol = 1e-4;   // [rad/s], settling threshold on delta_dot
constexpr double kRateAdvanceTol = 1e-3;  // [rad/s], "still advancing" threshold

// Dormand-Prince 5(4) embedded pair with FSAL and a PI-free standard
// step controller. N is the state dimension (1 for PSC, 2 for SG).
template <std::size_t N, class Rhs>
class AdaptiveRk {
public:
    using State = std::array<double, N>;

    AdaptiveRk(Rhs rhs, double rel_tol, double abs_tol)
        : rhs_(rhs), rel_tol_(rel_tol), abs_tol_(abs_tol) {}

    // Integrate y from t_from exactly to t_to.
    void advance(double t_from, double t_to, State& y) {
        double t = t_from;
        if (!have_k1_) {
            k_[0] = rhs_(t, y);
            have_k1_ = true;
        }
        if (h_ <= 0.0) {
            h_ = std::min(1e-4, t_to - t_from);
        }
        while (t < t_to) {
            // Underflow is judged on the controller's step, not on the
            // (legitimately small) sliver left to the segment boundary.
            if (h_ < 16.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(t), 1.0)) {
                std::ostringstream msg;
                msg << "step-size underflow at t=" << t << " (last state delta=" << y[0] << ")";
                throw IntegrationError(msg.str());
            }
            const double h = std::min(h_, t_to - t);
            const bool hit_end = (h >= t_to - t);
            State y_new;
            State k7;
            const double err = step(t, h, y, y_new, k7);
            if (err <= 1.0) {
                t = hit_end ? t_to : t + h;
                y = y_new;
                k_[0] = k7; // FSAL
                const double grow = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
                h_ = h * std::clamp(grow, 0.2, 5.0);
            } else {
                h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
            }
        }
    }

private:
    double step(double t, double h, const State& y, State& y_new, State& k7) {
        static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
        static constexpr double a21 = 1.0 / 5;
        static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
        static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
        static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                                a53 = 64448.0 / 6561, a54 = -212.0 / 729;
        static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                                a64 = 49.0 / 176, a65 = -5103.0 / 18656;
        static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                                b5 = -2187.0 / 6784, b6 = 11.0 / 84;
        static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                                e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

        State tmp;
        const State& k1 = k_[0];
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        const State k2 = rhs_(t + c2 * h, tmp);
        for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        const State k3 = rhs_(t + c3 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        const State k4 = rhs_(t + c4 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        const State k5 = rhs_(t + c5 * h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] +
                                 a65 * k5[i]);
        const State k6 = rhs_(t + h, tmp);
        for (std::size_t i = 0; i < N; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                                   b6 * k6[i]);
        k7 = rhs_(t + h, y_new);

        double err_sq = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                                  e6 * k6[i] + e7 * k7[i]);
            const double scale =
                abs_tol_ + rel_tol_ * std::max(std::abs(y[i]), std::abs(y_new[i]));
            err_sq += (e / scale) * (e / scale);
        }
        return std::sqrt(err_sq / N);
    }

    Rhs rhs_;
    double rel_tol_;
    double abs_tol_;
    double h_ = 0.0;
    std::array<State, 1> k_{};
    bool have_k1_ = false;
};

struct Segment {
    double t_begin;
    double t_end;
    const NetworkState* net;
    bool guard_overcurrent; // disturbance present and not yet cleared
};

// Split [0, t_end] at the fault/clearing instants. Event times are exact
// segment boundaries; the boundary sample is recorded under the incoming
// state.
std::vector<Segment> build_segments(const FaultScenario& sc, double t_end,
                                    std::vector<TrajectoryEvent>& events) {
    std::vector<Segment> segs;
    const NetworkState* fault_net = sc.during_fault ? &*sc.during_fault : &sc.post;
    if (sc.t_fault > 0.0) {
        segs.push_back({0.0, std::min(sc.t_fault, t_end), &sc.pre, false});
    }
    if (sc.t_fault < t_end) {
        events.push_back({sc.t_fault, EventKind::FaultOn});
        if (sc.during_fault && sc.t_clear && *sc.t_clear < t_end) {
            segs.push_back({sc.t_fault, *sc.t_clear, fault_net, true});
            events.push_back({*sc.t_clear, EventKind::FaultCleared});
            segs.push_back({*sc.t_clear, t_end, &sc.post, false});
        } else {
            segs.push_back({sc.t_fault, t_end, fault_net, true});
        }
    }
    return segs;
}

double auto_sample_dt(double t_end, const SimOptions& opt) {
    if (opt.sample_dt > 0.0) return opt.sample_dt;
    return std::clamp(t_end / 4000.0, 1e-4, 2e-3);
}

double resolve_delta0(const FaultScenario& sc, double p_ref, double v1, double v2) {
    if (sc.delta0) return *sc.delta0;
    const double ratio = p_ref * sc.pre.x_transfer / (v1 * v2);
    if (!(std::abs(ratio) <= 1.0)) {
        throw DomainError("scenario has no pre-fault SEP; an explicit delta0 is required");
    }
    return std::asin(ratio);
}

template <std::size_t N, class Rhs, class Record>
Trajectory run_segments(const FaultScenario& sc, double t_end, const SimOptions& opt,
                        std::array<double, N> y0, Rhs make_rhs, Record record,
                        ModelKind model, double i_limit) {
    sc.validate();
    if (!(t_end > 0.0)) {
        throw DomainError("integration horizon must be positive");
    }

    Trajectory tr;
    tr.model = model;
    std::vector<TrajectoryEvent> pending_events;
    const auto segments = build_segments(sc, t_end, pending_events);
    const double dt = auto_sample_dt(t_end, opt);

    auto emit = [&](double t, const std::array<double, N>& y, const NetworkState& net) {
        tr.samples.push_back(record(t, y, net));
        return tr.samples.back().i_g;
    };

    std::array<double, N> y = y0;
    bool truncated = false;
    auto emit_guarded = [&](double t, const NetworkState& sample_net, bool guarded) {
        const double i_g = emit(t, y, sample_net);
        if (guarded && i_g > i_limit) {
            tr.events.push_back({t, EventKind::CurrentLimitHit});
            truncated = true;
        }
    };

    // First sample belongs to the first segment's state.
    emit_guarded(0.0, *segments.front().net, segments.front().guard_overcurrent);

    for (std::size_t s = 0; s < segments.size() && !truncated; ++s) {
        const Segment& seg = segments[s];
        const NetworkState& net = *seg.net;
        const Segment* next = (s + 1 < segments.size()) ? &segments[s + 1] : nullptr;
        auto rhs = make_rhs(net);
        AdaptiveRk<N, decltype(rhs)> stepper(rhs, opt.rel_tol, opt.abs_tol);

        const double span = seg.t_end - seg.t_begin;
        const auto n_sub = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / dt)));
        double t_prev = seg.t_begin;
        for (std::size_t i = 1; i <= n_sub && !truncated; ++i) {
            const bool last = (i == n_sub);
            const double t = last ? seg.t_end
                                  : seg.t_begin + span * static_cast<double>(i) /
                                                      static_cast<double>(n_sub);
            stepper.advance(t_prev, t, y);
            t_prev = t;
            // A boundary sample is owned by the incoming segment's state.
            const NetworkState& sample_net = (last && next) ? *next->net : net;
            const bool guarded =
                (last && next) ? next->guard_overcurrent : seg.guard_overcurrent;
            emit_guarded(t, sample_net, guarded);
        }
    }

    const double t_last = tr.samples.back().t;
    for (const auto& ev : pending_events) {
        if (ev.t <= t_last) {
            tr.events.push_back(ev);
        }
    }
    std::stable_sort(tr.events.begin(), tr.events.end(),
                     [](const TrajectoryEvent& l, const TrajectoryEvent& r) {
                         return l.t != r.t ? l.t < r.t
                                           : static_cast<int>(l.kind) < static_cast<int>(r.kind);
                     });
    return tr;
}

} // namespace

const char* to_string(EventKind kind) {
    switch (kind) {
    case EventKind::FaultOn: return "fault_on";
    case EventKind::FaultCleared: return "fault_cleared";
    case EventKind::CurrentLimitHit: return "current_limit_hit";
    }
    return "?";
}

const char* to_string(StabilityClass c) {
    switch (c) {
    case StabilityClass::ConvergedDirect: return "converged_direct";
    case StabilityClass::ConvergedAfterSlip: return "converged_after_slip";
    case StabilityClass::Unbounded: return "unbounded";
    case StabilityClass::CurrentLimited: return "current_limited";
    }
    return "?";
}

std::optional<double> Trajectory::event_time(EventKind kind) const {
    for (const auto& ev : events) {
        if (ev.kind == kind) return ev.t;
    }
    return std::nullopt;
}

double Trajectory::delta_at(double t) const {
    auto it = std::lower_bound(samples.begin(), samples.end(), t,
                               [](const TrajectorySample& s, double v) { return s.t < v; });
    if (it != samples.end() && std::abs(it->t - t) < 1e-9) return it->delta;
    if (it != samples.begin() && std::abs(std::prev(it)->t - t) < 1e-9) {
        return std::prev(it)->delta;
    }
    throw Error("delta_at: no sample recorded at the requested time");
}

double default_horizon(const FaultScenario& sc, const PscParams& p) {
    const double t_ref = sc.t_clear ? *sc.t_clear : sc.t_fault;
    return t_ref + 10.0 * sc.post.x_transfer / p.k;
}

Trajectory integrate(const FaultScenario& sc, const PscParams& p, double t_end,
                     const SimOptions& opt) {
    if (!(p.k > 0.0)) {
        throw DomainError("PSC gain k must be positive");
    }
    const double delta0 = resolve_delta0(sc, p.p_ref, p.v_mref, p.v_g);
    auto make_rhs = [&p](const NetworkState& net) {
        return [&p, &net](double, const std::array<double, 1>& y) -> std::array<double, 1> {
            return {psc_rhs(y[0], p, net)};
        };
    };
    auto record = [&p](double t, const std::array<double, 1>& y, const NetworkState& net) {
        return TrajectorySample{t, y[0], psc_rhs(y[0], p, net),
                                electrical_power(y[0], p.v_mref, p.v_g, net.x_transfer),
                                grid_current(y[0], p.v_mref, p.v_g, net.x_transfer)};
    };
    return run_segments<1>(sc, t_end, opt, {delta0}, make_rhs, record, ModelKind::Psc,
                           p.i_limit);
}

Trajectory sg_integrate(const FaultScenario& sc, const SgParams& p, double v1, double v2,
                        double t_end, const SimOptions& opt) {
    if (!(p.j_eff > 0.0) || p.d < 0.0) {
        throw DomainError("SG parameters need j_eff > 0 and d >= 0");
    }
    const double delta0 = resolve_delta0(sc, p.p_m, v1, v2);
    auto make_rhs = [&](const NetworkState& net) {
        return [&p, v1, v2, &net](double,
                                  const std::array<double, 2>& y) -> std::array<double, 2> {
            const AngleState d = sg_rhs({y[0], y[1]}, p, v1, v2, net);
            return {d.delta, d.delta_dot};
        };
    };
    auto record = [&](double t, const std::array<double, 2>& y, const NetworkState& net) {
        return TrajectorySample{t, y[0], y[1],
                                electrical_power(y[0], v1, v2, net.x_transfer),
                                grid_current(y[0], v1, v2, net.x_transfer)};
    };
    // No converter current limit on the SG baseline.
    return run_segments<2>(sc, t_end, opt, {delta0, 0.0}, make_rhs, record, ModelKind::Sg,
                           std::numeric_limits<double>::infinity());
}

SimReport classify(const Trajectory& tr, const Equilibria& post_eq, double settle_tol,
                   double settle_window) {
    if (tr.samples.empty()) {
        throw InconclusiveError("classify: empty trajectory");
    }

    SimReport report{StabilityClass::ConvergedDirect, std::nullopt, std::nullopt, 0};
    if (const auto t_clear = tr.event_time(EventKind::FaultCleared)) {
        report.clearing_angle = tr.delta_at(*t_clear);
    }

    if (tr.event_time(EventKind::CurrentLimitHit)) {
        report.classification = StabilityClass::CurrentLimited;
        return report;
    }

    const TrajectorySample& end = tr.samples.back();
    const double t_end = end.t;

    if (post_eq.exist()) {
        const double n_real = (end.delta - *post_eq.sep) / kTwoPi;
        const double n = std::round(n_real);
        const double target = *post_eq.sep + n * kTwoPi;
        bool settled = true;
        for (auto it = tr.samples.rbegin(); it != tr.samples.rend() && settled; ++it) {
            if (it->t < t_end - settle_window) break;
            settled = std::abs(it->delta - target) < settle_tol &&
                      std::abs(it->delta_dot) < kRateSettleTol;
        }
        if (settled) {
            if (n < 0.0) {
                throw InconclusiveError("classify: settled below the reference SEP branch");
            }
            report.cycle_slips = static_cast<int>(n);
            report.final_delta = end.delta;
            report.classification = n == 0.0 ? StabilityClass::ConvergedDirect
                                             : StabilityClass::ConvergedAfterSlip;
            return report;
        }
    }

    const double t_fault = tr.event_time(EventKind::FaultOn).value_or(tr.samples.front().t);
    const double advance = std::abs(end.delta - tr.delta_at(t_fault));
    if (!post_eq.exist() && std::abs(end.delta_dot) > kRateAdvanceTol && advance > 4.0 * kPi) {
        report.classification = StabilityClass::Unbounded;
        report.cycle_slips = static_cast<int>(std::floor(advance / kTwoPi));
        return report;
    }

    std::ostringstream msg;
    msg << "classify: ambiguous terminal state at t=" << t_end << " (delta=" << end.delta
        << " rad, delta_dot=" << end.delta_dot << " rad/s, advance since fault=" << advance
        << " rad)";
    throw InconclusiveError(msg.str());
}

double numeric_cct(const FaultScenario& sc, const PscParams& p, double time_tol,
                   const SimOptions& opt) {
    sc.validate();
    if (!(time_tol > 0.0)) {
        throw DomainError("numeric_cct: time tolerance must be positive");
    }
    if (!sc.during_fault) {
        throw DomainError("numeric_cct: scenario has no during-fault state");
    }
    if (find_equilibria(p, *sc.during_fault).exist()) {
        throw IntegrationError("numeric_cct: during-fault state has equilibria; "
                               "no critical clearing time exists");
    }
    const double clearing_angle = cca(p, sc.post);
    const double delta0 = resolve_delta0(sc, p.p_ref, p.v_mref, p.v_g);
    if (delta0 >= clearing_angle) return 0.0;

    const NetworkState& net = *sc.during_fault;
    auto rhs = [&p, &net](double, const std::array<double, 1>& y) -> std::array<double, 1> {
        return {psc_rhs(y[0], p, net)};
    };
    auto angle_after = [&](double duration) {
        std::array<double, 1> y{delta0};
        if (duration > 0.0) {
            AdaptiveRk<1, decltype(rhs)> stepper(rhs, opt.rel_tol, opt.abs_tol);
            stepper.advance(0.0, duration, y);
        }
        return y[0];
    };

    // One full slip advances delta by 2*pi, which covers any angle gap, so
    // the period bounds the bracket search.
    const auto [a, b] = ab_coefficients(p, net);
    const double hi_max = 1.25 * slip_period(a, b) + time_tol;
    double lo = 0.0;
    double hi = std::min(std::max(time_tol, 1e-2), hi_max);
    while (angle_after(hi) <= clearing_angle) {
        if (hi >= hi_max) {
            throw IntegrationError("numeric_cct: failed to bracket the clearing angle");
        }
        lo = hi;
        hi = std::min(hi * 2.0, hi_max);
    }
    while (hi - lo > time_tol) {
        const double mid = 0.5 * (lo + hi);
        (angle_after(mid) <= clearing_angle ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<SimReport> sweep_clearing(const FaultScenario& sc, const PscParams& p,
                                      std::span<const double> clear_times,
                                      double horizon_after_clear, const SimOptions& opt) {
    if (clear_times.empty()) {
        throw DomainError("sweep_clearing: need at least one clearing time");
    }
    std::vector<SimReport> reports;
    reports.reserve(clear_times.size());
    const Equilibria post_eq = find_equilibria(p, sc.post);
    for (const double tc : clear_times) {
        if (!(tc > 0.0)) {
            throw DomainError("sweep_clearing: clearing times must be positive");
        }
        FaultScenario run = sc;
        run.t_clear = sc.t_fault + tc;
        const double tail = horizon_after_clear > 0.0
                                ? horizon_after_clear
                                : default_horizon(run, p) - *run.t_clear;
        const Trajectory tr = integrate(run, p, *run.t_clear + tail, opt);
        reports.push_back(classify(tr, post_eq, opt.settle_tol, opt.settle_window));
    }
    return reports;
}

std::optional<double> check_current_limit(const Trajectory& tr, double i_limit) {
    for (const auto& s : tr.samples) {
        if (s.i_g > i_limit) return s.t;
    }
    return std::nullopt;
}

} // namespace psctsa
