#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "psctsa/analytic.hpp"
#include "psctsa/dynamics.hpp"
#include "psctsa/errors.hpp"
#include "psctsa/network.hpp"
#include "psctsa/per_unit.hpp"
#include "psctsa/scenario.hpp"
#include "psctsa/simulate.hpp"
#include "psctsa/version.hpp"

namespace py = pybind11;
using namespace psctsa;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Transient stability analysis of grid-connected converters under "
              "power synchronization control";
    m.attr("__version__") = kVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<IntegrationError>(m, "IntegrationError", PyExc_RuntimeError);
    py::register_exception<InconclusiveError>(m, "InconclusiveError", PyExc_RuntimeError);

    py::class_<PerUnitBase>(m, "PerUnitBase")
        .def(py::init<double, double, double>(), py::arg("s_base"), py::arg("v_base"),
             py::arg("f_base"))
        .def_readonly("s_base", &PerUnitBase::s_base)
        .def_readonly("v_base", &PerUnitBase::v_base)
        .def_readonly("f_base", &PerUnitBase::f_base)
        .def_property_readonly("omega_base", &PerUnitBase::omega_base)
        .def_property_readonly("z_base", &PerUnitBase::z_base);

    py::enum_<SiKind>(m, "SiKind")
        .value("INDUCTANCE", SiKind::Inductance)
        .value("POWER", SiKind::Power)
        .value("VOLTAGE", SiKind::Voltage)
        .value("GAIN", SiKind::Gain);
    m.def("to_per_unit", &to_per_unit, py::arg("si_value"), py::arg("kind"), py::arg("base"));
    m.def("from_per_unit", &from_per_unit, py::arg("pu_value"), py::arg("kind"),
          py::arg("base"));

    py::enum_<NetLabel>(m, "NetLabel")
        .value("PRE_FAULT", NetLabel::PreFault)
        .value("DURING_FAULT", NetLabel::DuringFault)
        .value("POST_FAULT", NetLabel::PostFault);

    py::class_<NetworkElements>(m, "NetworkElements")
        .def(py::init([](double x_t, double x_g1, double x_g2, std::optional<double> x_gnd,
                         std::optional<double> x_f) {
                 return NetworkElements{x_t, x_g1, x_g2, x_gnd, x_f};
             }),
             py::arg("x_t"), py::arg("x_g1"), py::arg("x_g2"), py::arg("x_gnd") = py::none(),
             py::arg("x_f") = py::none())
        .def_readwrite("x_t", &NetworkElements::x_t)
        .def_readwrite("x_g1", &NetworkElements::x_g1)
        .def_readwrite("x_g2", &NetworkElements::x_g2)
        .def_readwrite("x_gnd", &NetworkElements::x_gnd)
        .def_readwrite("x_f", &NetworkElements::x_f);

    py::class_<NetworkState>(m, "NetworkState")
        .def(py::init<NetLabel, double>(), py::arg("label"), py::arg("x_transfer"))
        .def_readonly("label", &NetworkState::label)
        .def_readonly("x_transfer", &NetworkState::x_transfer);

    m.def("reduce_pre", &reduce_pre);
    m.def("reduce_during_fault", &reduce_during_fault);
    m.def("reduce_post", &reduce_post);

    py::class_<FaultScenario>(m, "FaultScenario")
        .def(py::init([](NetworkState pre, std::optional<NetworkState> during_fault,
                         NetworkState post, double t_fault, std::optional<double> t_clear,
                         std::optional<double> delta0) {
                 FaultScenario sc{pre, during_fault, post, t_fault, t_clear, delta0};
                 sc.validate();
                 return sc;
             }),
             py::arg("pre"), py::arg("during_fault"), py::arg("post"), py::arg("t_fault"),
             py::arg("t_clear") = py::none(), py::arg("delta0") = py::none())
        .def_readwrite("pre", &FaultScenario::pre)
        .def_readwrite("during_fault", &FaultScenario::during_fault)
        .def_readwrite("post", &FaultScenario::post)
        .def_readwrite("t_fault", &FaultScenario::t_fault)
        .def_readwrite("t_clear", &FaultScenario::t_clear)
        .def_readwrite("delta0", &FaultScenario::delta0);

    py::class_<PscParams>(m, "PscParams")
        .def(py::init([](double k, double p_ref, double v_mref, double v_g, double i_limit) {
                 return PscParams{k, p_ref, v_mref, v_g, i_limit};
             }),
             py::arg("k"), py::arg("p_ref"), py::arg("v_mref") = 1.0, py::arg("v_g") = 1.0,
             py::arg("i_limit") = 1.8)
        .def_readwrite("k", &PscParams::k)
        .def_readwrite("p_ref", &PscParams::p_ref)
        .def_readwrite("v_mref", &PscParams::v_mref)
        .def_readwrite("v_g", &PscParams::v_g)
        .def_readwrite("i_limit", &PscParams::i_limit)
        .def_readwrite("omega0", &PscParams::omega0);

    py::class_<SgParams>(m, "SgParams")
        .def(py::init([](double p_m, double j_eff, double d) {
                 return SgParams{p_m, j_eff, d};
             }),
             py::arg("p_m"), py::arg("j_eff"), py::arg("d") = 0.0)
        .def_readwrite("p_m", &SgParams::p_m)
        .def_readwrite("j_eff", &SgParams::j_eff)
        .def_readwrite("d", &SgParams::d)
        .def_readwrite("omega_n", &SgParams::omega_n);

    m.def("electrical_power", &electrical_power, py::arg("delta"), py::arg("v1"),
          py::arg("v2"), py::arg("x"));
    m.def("grid_current", &grid_current, py::arg("delta"), py::arg("v1"), py::arg("v2"),
          py::arg("x"));
    m.def("psc_rhs", &psc_rhs, py::arg("delta"), py::arg("params"), py::arg("net"));
    m.def("ab_coefficients", &ab_coefficients, py::arg("params"), py::arg("net"));

    py::class_<Equilibria>(m, "Equilibria")
        .def_readonly("sep", &Equilibria::sep)
        .def_readonly("uep", &Equilibria::uep)
        .def_readonly("p_max", &Equilibria::p_max)
        .def_property_readonly("exists", &Equilibria::exist);

    py::enum_<EqKind>(m, "EqKind").value("SEP", EqKind::Sep).value("UEP", EqKind::Uep);

    py::class_<PortraitPoint>(m, "PortraitPoint")
        .def_readonly("delta", &PortraitPoint::delta)
        .def_readonly("delta_dot", &PortraitPoint::delta_dot);

    py::class_<PortraitEquilibrium>(m, "PortraitEquilibrium")
        .def_readonly("delta", &PortraitEquilibrium::delta)
        .def_readonly("kind", &PortraitEquilibrium::kind);

    py::class_<PhasePortrait>(m, "PhasePortrait")
        .def_readonly("net_label", &PhasePortrait::net_label)
        .def_readonly("samples", &PhasePortrait::samples)
        .def_readonly("equilibria", &PhasePortrait::equilibria);

    m.def("find_equilibria", &find_equilibria, py::arg("params"), py::arg("net"));
    m.def("sample_portrait", &sample_portrait, py::arg("params"), py::arg("net"),
          py::arg("delta_min"), py::arg("delta_max"), py::arg("n"));
    m.def("closed_form_time", &closed_form_time, py::arg("delta"), py::arg("delta0"),
          py::arg("a"), py::arg("b"));
    m.def("cca", &cca, py::arg("params"), py::arg("post_net"));
    m.def("cct", &cct, py::arg("params"), py::arg("during_net"), py::arg("post_net"),
          py::arg("delta0"));
    m.def("slip_period", &slip_period, py::arg("a"), py::arg("b"));

    py::enum_<EventKind>(m, "EventKind")
        .value("FAULT_ON", EventKind::FaultOn)
        .value("FAULT_CLEARED", EventKind::FaultCleared)
        .value("CURRENT_LIMIT_HIT", EventKind::CurrentLimitHit);

    py::enum_<ModelKind>(m, "ModelKind").value("PSC", ModelKind::Psc).value("SG", ModelKind::Sg);

    py::class_<TrajectoryEvent>(m, "TrajectoryEvent")
        .def_readonly("t", &TrajectoryEvent::t)
        .def_readonly("kind", &TrajectoryEvent::kind);

    py::class_<TrajectorySample>(m, "TrajectorySample")
        .def_readonly("t", &TrajectorySample::t)
        .def_readonly("delta", &TrajectorySample::delta)
        .def_readonly("delta_dot", &TrajectorySample::delta_dot)
        .def_readonly("p_e", &TrajectorySample::p_e)
        .def_readonly("i_g", &TrajectorySample::i_g);

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("model", &Trajectory::model)
        .def_readonly("samples", &Trajectory::samples)
        .def_readonly("events", &Trajectory::events);

    py::enum_<StabilityClass>(m, "StabilityClass")
        .value("CONVERGED_DIRECT", StabilityClass::ConvergedDirect)
        .value("CONVERGED_AFTER_SLIP", StabilityClass::ConvergedAfterSlip)
        .value("UNBOUNDED", StabilityClass::Unbounded)
        .value("CURRENT_LIMITED", StabilityClass::CurrentLimited);

    py::class_<SimReport>(m, "SimReport")
        .def_readonly("classification", &SimReport::classification)
        .def_readonly("final_delta", &SimReport::final_delta)
        .def_readonly("clearing_angle", &SimReport::clearing_angle)
        .def_readonly("cycle_slips", &SimReport::cycle_slips);

    py::class_<SimOptions>(m, "SimOptions")
        .def(py::init<>())
        .def_readwrite("rel_tol", &SimOptions::rel_tol)
        .def_readwrite("abs_tol", &SimOptions::abs_tol)
        .def_readwrite("sample_dt", &SimOptions::sample_dt)
        .def_readwrite("settle_tol", &SimOptions::settle_tol)
        .def_readwrite("settle_window", &SimOptions::settle_window);

    m.def("default_horizon", &default_horizon, py::arg("scenario"), py::arg("params"));
    m.def("integrate", &integrate, py::arg("scenario"), py::arg("params"), py::arg("t_end"),
          py::arg("options") = SimOptions{});
    m.def("classify", &classify, py::arg("trajectory"), py::arg("post_equilibria"),
          py::arg("settle_tol") = 1e-4, py::arg("settle_window") = 0.2);
    m.def("numeric_cct", &numeric_cct, py::arg("scenario"), py::arg("params"),
          py::arg("time_tol"), py::arg("options") = SimOptions{});
    m.def(
        "sweep_clearing",
        [](const FaultScenario& sc, const PscParams& p, const std::vector<double>& times,
           double horizon_after_clear, const SimOptions& opt) {
            return sweep_clearing(sc, p, times, horizon_after_clear, opt);
        },
        py::arg("scenario"), py::arg("params"), py::arg("clear_times"),
        py::arg("horizon_after_clear") = 0.0, py::arg("options") = SimOptions{});
    m.def("sg_integrate", &sg_integrate, py::arg("scenario"), py::arg("params"), py::arg("v1"),
          py::arg("v2"), py::arg("t_end"), py::arg("options") = SimOptions{});
    m.def("check_current_limit", &check_current_limit, py::arg("trajectory"),
          py::arg("i_limit"));

    py::enum_<FaultKind>(m, "FaultKind")
        .value("LINE_LOSS", FaultKind::LineLoss)
        .value("THREE_PHASE_GROUND_FAULT", FaultKind::ThreePhaseGroundFault);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def_readonly("name", &ScenarioConfig::name)
        .def_readonly("base", &ScenarioConfig::base)
        .def_readonly("elements", &ScenarioConfig::elements)
        .def_readonly("psc", &ScenarioConfig::psc)
        .def_readonly("sg", &ScenarioConfig::sg)
        .def_readonly("fault_kind", &ScenarioConfig::fault_kind)
        .def_readonly("t_fault", &ScenarioConfig::t_fault)
        .def_readonly("t_clear", &ScenarioConfig::t_clear)
        .def_readonly("delta0", &ScenarioConfig::delta0)
        .def_readonly("t_end", &ScenarioConfig::t_end)
        .def_readonly("sim", &ScenarioConfig::sim)
        .def_readonly("digest", &ScenarioConfig::digest)
        .def("scenario", &ScenarioConfig::scenario);

    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def(
        "parse_scenario",
        [](const std::string& text) { return parse_scenario(nlohmann::json::parse(text)); },
        py::arg("json_text"));
}
