#include "psctsa/scenario.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "psctsa/errors.hpp"

namespace psctsa {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError("config: " + where + ": " + what);
}

const json& member(const json& j, const std::string& where, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing key '") + key + "'");
    return *it;
}

double number(const json& j, const std::string& where, const char* key) {
    const json& v = member(j, where, key);
    if (!v.is_number()) fail(where, std::string("'") + key + "' must be a number");
    return v.get<double>();
}

std::optional<double> opt_number(const json& j, const std::string& where, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) fail(where, std::string("'") + key + "' must be a number");
    return it->get<double>();
}

void reject_unknown_keys(const json& j, const std::string& where,
                         std::initializer_list<const char*> known) {
    if (!j.is_object()) fail(where, "expected an object");
    for (const auto& [key, value] : j.items()) {
        bool found = false;
        for (const char* k : known) {
            if (key == k) {
                found = true;
                break;
            }
        }
        if (!found) fail(where, "unknown key '" + key + "'");
    }
}

struct Quantity {
    double value;
    std::string unit;
};

Quantity quantity(const json& j, const std::string& where, const char* key) {
    const json& q = member(j, where, key);
    const std::string ctx = where + "." + key;
    if (!q.is_object()) {
        fail(ctx, "dimensioned quantities need an explicit unit tag: "
                  "{\"value\": ..., \"unit\": ...}");
    }
    reject_unknown_keys(q, ctx, {"value", "unit"});
    Quantity out;
    out.value = number(q, ctx, "value");
    const json& u = member(q, ctx, "unit");
    if (!u.is_string()) fail(ctx, "'unit' must be a string");
    out.unit = u.get<std::string>();
    return out;
}

std::optional<Quantity> opt_quantity(const json& j, const std::string& where, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return quantity(j, where, key);
}

double resolve_power(const Quantity& q, const PerUnitBase& base, const std::string& ctx) {
    if (q.unit == "pu") return q.value;
    double si = q.value;
    if (q.unit == "W") {
    } else if (q.unit == "kW") {
        si *= 1e3;
    } else if (q.unit == "MW") {
        si *= 1e6;
    } else if (q.unit == "GW") {
        si *= 1e9;
    } else {
        fail(ctx, "unknown power unit '" + q.unit + "' (W, kW, MW, GW, pu)");
    }
    return base.power_to_pu(si);
}

// Peak phase voltage is the internal convention; *_rms tags are phase RMS.
double resolve_voltage_peak(const Quantity& q, const std::string& ctx) {
    double si = q.value;
    if (q.unit == "V") {
    } else if (q.unit == "kV") {
        si *= 1e3;
    } else if (q.unit == "V_rms") {
        si *= std::numbers::sqrt2;
    } else if (q.unit == "kV_rms") {
        si *= 1e3 * std::numbers::sqrt2;
    } else {
        fail(ctx, "unknown voltage unit '" + q.unit + "' (V, kV, V_rms, kV_rms)");
    }
    return si;
}

double resolve_reactance(const Quantity& q, const PerUnitBase& base, const std::string& ctx) {
    if (q.unit == "pu") return q.value;
    double henry = q.value;
    if (q.unit == "H") {
    } else if (q.unit == "mH") {
        henry *= 1e-3;
    } else if (q.unit == "uH") {
        henry *= 1e-6;
    } else {
        fail(ctx, "unknown inductance unit '" + q.unit + "' (H, mH, uH, pu)");
    }
    return base.inductance_to_pu(henry);
}

double resolve_gain(const Quantity& q, const PerUnitBase& base, const std::string& ctx) {
    if (q.unit == "rad_per_Ws" || q.unit == "rad/(W*s)") {
        return base.gain_to_pu(q.value);
    }
    if (q.unit == "rad_per_s" || q.unit == "rad/s") {
        return q.value;
    }
    if (q.unit == "pu") {
        fail(ctx, "the p.u. label for the synchronization gain has no defined base; "
                  "give K_i as rad_per_Ws or the effective gain as rad_per_s");
    }
    fail(ctx, "unknown gain unit '" + q.unit + "' (rad_per_Ws, rad_per_s)");
}

double resolve_pu_scalar(const json& j, const std::string& where, const char* key,
                         double fallback) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    if (it->is_number()) return it->get<double>();
    const Quantity q = quantity(j, where, key);
    if (q.unit != "pu") fail(where + "." + key, "expected a per-unit value");
    return q.value;
}

json pu_quantity(double value) { return json{{"value", value}, {"unit", "pu"}}; }

} // namespace

const char* to_string(FaultKind kind) {
    switch (kind) {
    case FaultKind::LineLoss: return "line_loss";
    case FaultKind::ThreePhaseGroundFault: return "three_phase_ground_fault";
    }
    return "?";
}

std::string fnv1a64_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex;
    out.width(16);
    out.fill('0');
    out << h;
    return out.str();
}

FaultScenario ScenarioConfig::scenario() const {
    FaultScenario sc;
    sc.pre = reduce_pre(elements);
    sc.post = reduce_post(elements);
    if (fault_kind == FaultKind::ThreePhaseGroundFault) {
        sc.during_fault = reduce_during_fault(elements);
    }
    sc.t_fault = t_fault;
    sc.t_clear = t_clear;
    sc.delta0 = delta0;
    sc.validate();
    return sc;
}

ScenarioConfig parse_scenario(const json& j) {
    reject_unknown_keys(j, "scenario",
                        {"name", "base", "elements", "psc", "sg", "fault", "sim"});
    ScenarioConfig cfg;

    if (auto it = j.find("name"); it != j.end()) {
        if (!it->is_string()) fail("scenario", "'name' must be a string");
        cfg.name = it->get<std::string>();
    }

    const json& base = member(j, "scenario", "base");
    reject_unknown_keys(base, "base", {"s_base", "v_base", "f_base_hz"});
    const Quantity s_q = quantity(base, "base", "s_base");
    const Quantity v_q = quantity(base, "base", "v_base");
    const double f_base = number(base, "base", "f_base_hz");
    if (s_q.unit == "pu" || v_q.unit == "pu") fail("base", "base values must be SI");
    // Unity base: the helper only applies the SI prefix here.
    const double s_si = resolve_power(s_q, PerUnitBase{1.0, 1.0, 1.0}, "base.s_base");
    const double v_si = resolve_voltage_peak(v_q, "base.v_base");
    try {
        cfg.base = PerUnitBase{s_si, v_si, f_base};
    } catch (const DomainError& e) {
        fail("base", e.what());
    }

    const json& el = member(j, "scenario", "elements");
    reject_unknown_keys(el, "elements", {"L_t", "L_g1", "L_g2", "L_gnd", "L_f"});
    cfg.elements.x_t = resolve_reactance(quantity(el, "elements", "L_t"), cfg.base, "elements.L_t");
    cfg.elements.x_g1 =
        resolve_reactance(quantity(el, "elements", "L_g1"), cfg.base, "elements.L_g1");
    cfg.elements.x_g2 =
        resolve_reactance(quantity(el, "elements", "L_g2"), cfg.base, "elements.L_g2");
    if (auto q = opt_quantity(el, "elements", "L_gnd")) {
        cfg.elements.x_gnd = resolve_reactance(*q, cfg.base, "elements.L_gnd");
    }
    if (auto q = opt_quantity(el, "elements", "L_f")) {
        cfg.elements.x_f = resolve_reactance(*q, cfg.base, "elements.L_f");
    }
    for (double x : {cfg.elements.x_t, cfg.elements.x_g1, cfg.elements.x_g2,
                     cfg.elements.x_gnd.value_or(1.0), cfg.elements.x_f.value_or(1.0)}) {
        if (!(x > 0.0)) fail("elements", "reactances must be positive");
    }

    const json& psc = member(j, "scenario", "psc");
    reject_unknown_keys(psc, "psc", {"k_i", "p_ref", "v_mref", "v_g", "i_limit"});
    cfg.psc.k = resolve_gain(quantity(psc, "psc", "k_i"), cfg.base, "psc.k_i");
    cfg.psc.p_ref = resolve_power(quantity(psc, "psc", "p_ref"), cfg.base, "psc.p_ref");
    cfg.psc.v_mref = resolve_pu_scalar(psc, "psc", "v_mref", 1.0);
    cfg.psc.v_g = resolve_pu_scalar(psc, "psc", "v_g", 1.0);
    cfg.psc.i_limit = opt_number(psc, "psc", "i_limit").value_or(1.8);
    cfg.psc.omega0 = cfg.base.omega_base();
    if (!(cfg.psc.k > 0.0) || !(cfg.psc.v_mref > 0.0) || !(cfg.psc.v_g > 0.0) ||
        !(cfg.psc.i_limit > 0.0)) {
        fail("psc", "k, v_mref, v_g and i_limit must be positive");
    }

    cfg.sg.p_m = cfg.psc.p_ref;
    cfg.sg.j_eff = 0.0255;
    cfg.sg.d = 0.0;
    cfg.sg.omega_n = cfg.base.omega_base();
    if (auto it = j.find("sg"); it != j.end() && !it->is_null()) {
        reject_unknown_keys(*it, "sg", {"p_m_pu", "j_eff", "d", "omega_n_rad_s"});
        cfg.sg.p_m = opt_number(*it, "sg", "p_m_pu").value_or(cfg.sg.p_m);
        cfg.sg.j_eff = opt_number(*it, "sg", "j_eff").value_or(cfg.sg.j_eff);
        cfg.sg.d = opt_number(*it, "sg", "d").value_or(cfg.sg.d);
        cfg.sg.omega_n = opt_number(*it, "sg", "omega_n_rad_s").value_or(cfg.sg.omega_n);
        if (!(cfg.sg.j_eff > 0.0) || cfg.sg.d < 0.0) {
            fail("sg", "j_eff must be positive and d non-negative");
        }
    }

    const json& fault = member(j, "scenario", "fault");
    reject_unknown_keys(fault, "fault",
                        {"kind", "t_fault_s", "t_clear_s", "delta0_deg", "delta0_rad"});
    const json& kind = member(fault, "fault", "kind");
    if (!kind.is_string()) fail("fault", "'kind' must be a string");
    const std::string kind_s = kind.get<std::string>();
    if (kind_s == "line_loss") {
        cfg.fault_kind = FaultKind::LineLoss;
    } else if (kind_s == "three_phase_ground_fault") {
        cfg.fault_kind = FaultKind::ThreePhaseGroundFault;
    } else {
        fail("fault", "unknown kind '" + kind_s + "'");
    }
    cfg.t_fault = number(fault, "fault", "t_fault_s");
    cfg.t_clear = opt_number(fault, "fault", "t_clear_s");
    const auto d0_deg = opt_number(fault, "fault", "delta0_deg");
    const auto d0_rad = opt_number(fault, "fault", "delta0_rad");
    if (d0_deg && d0_rad) fail("fault", "give delta0 in degrees or radians, not both");
    if (d0_deg) cfg.delta0 = *d0_deg * std::numbers::pi / 180.0;
    if (d0_rad) cfg.delta0 = *d0_rad;
    if (cfg.t_fault < 0.0) fail("fault", "t_fault_s must be non-negative");
    if (cfg.fault_kind == FaultKind::LineLoss && cfg.t_clear) {
        fail("fault", "a line-loss disturbance has nothing to clear");
    }
    if (cfg.fault_kind == FaultKind::ThreePhaseGroundFault && !cfg.elements.x_gnd) {
        fail("fault", "a ground fault needs elements.L_gnd");
    }
    if (cfg.t_clear && !(*cfg.t_clear > cfg.t_fault)) {
        fail("fault", "t_clear_s must be later than t_fault_s");
    }

    const json& sim = member(j, "scenario", "sim");
    reject_unknown_keys(sim, "sim",
                        {"t_end_s", "rel_tol", "abs_tol", "settle_tol_rad", "sample_dt_s"});
    cfg.t_end = number(sim, "sim", "t_end_s");
    cfg.sim.rel_tol = opt_number(sim, "sim", "rel_tol").value_or(1e-10);
    cfg.sim.abs_tol = opt_number(sim, "sim", "abs_tol").value_or(1e-12);
    cfg.sim.settle_tol = opt_number(sim, "sim", "settle_tol_rad").value_or(1e-4);
    cfg.sim.sample_dt = opt_number(sim, "sim", "sample_dt_s").value_or(0.0);
    if (!(cfg.t_end > 0.0) || !(cfg.sim.rel_tol > 0.0) || !(cfg.sim.abs_tol > 0.0) ||
        !(cfg.sim.settle_tol > 0.0) || cfg.sim.sample_dt < 0.0) {
        fail("sim", "t_end_s and tolerances must be positive");
    }

    return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file: " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
    ScenarioConfig cfg = parse_scenario(j);
    cfg.digest = fnv1a64_hex(text);
    return cfg;
}

json serialize_scenario(const ScenarioConfig& cfg) {
    json el{{"L_t", pu_quantity(cfg.elements.x_t)},
            {"L_g1", pu_quantity(cfg.elements.x_g1)},
            {"L_g2", pu_quantity(cfg.elements.x_g2)}};
    if (cfg.elements.x_gnd) el["L_gnd"] = pu_quantity(*cfg.elements.x_gnd);
    if (cfg.elements.x_f) el["L_f"] = pu_quantity(*cfg.elements.x_f);

    json fault{{"kind", to_string(cfg.fault_kind)}, {"t_fault_s", cfg.t_fault}};
    if (cfg.t_clear) fault["t_clear_s"] = *cfg.t_clear;
    if (cfg.delta0) fault["delta0_rad"] = *cfg.delta0;

    return json{
        {"name", cfg.name},
        {"base",
         {{"s_base", json{{"value", cfg.base.s_base}, {"unit", "W"}}},
          {"v_base", json{{"value", cfg.base.v_base}, {"unit", "V"}}},
          {"f_base_hz", cfg.base.f_base}}},
        {"elements", el},
        {"psc",
         {{"k_i", json{{"value", cfg.psc.k}, {"unit", "rad_per_s"}}},
          {"p_ref", pu_quantity(cfg.psc.p_ref)},
          {"v_mref", cfg.psc.v_mref},
          {"v_g", cfg.psc.v_g},
          {"i_limit", cfg.psc.i_limit}}},
        {"sg",
         {{"p_m_pu", cfg.sg.p_m},
          {"j_eff", cfg.sg.j_eff},
          {"d", cfg.sg.d},
          {"omega_n_rad_s", cfg.sg.omega_n}}},
        {"fault", fault},
        {"sim",
         {{"t_end_s", cfg.t_end},
          {"rel_tol", cfg.sim.rel_tol},
          {"abs_tol", cfg.sim.abs_tol},
          {"settle_tol_rad", cfg.sim.settle_tol},
          {"sample_dt_s", cfg.sim.sample_dt}}}};
}

} // namespace psctsa
