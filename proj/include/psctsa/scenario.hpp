#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "psctsa/dynamics.hpp"
#include "psctsa/network.hpp"
#include "psctsa/per_unit.hpp"
#include "psctsa/simulate.hpp"

namespace psctsa {

enum class FaultKind { LineLoss, ThreePhaseGroundFault };

const char* to_string(FaultKind kind);

/// A fully resolved scenario: per-unit parameters, disturbance timing and
/// simulation controls. Every dimensioned config entry carries an explicit
/// unit tag; resolution to per-unit happens here and nowhere else.
struct ScenarioConfig {
    std::string name;
    PerUnitBase base{1.0, 1.0, 1.0};
    NetworkElements elements{};
    PscParams psc{};
    SgParams sg{};
    FaultKind fault_kind = FaultKind::LineLoss;
    double t_fault = 0.0;
    std::optional<double> t_clear;
    std::optional<double> delta0; ///< [rad]
    double t_end = 0.0;
    SimOptions sim{};
    std::string digest; ///< fnv1a64 of the raw config text (empty if parsed from json)

    /// Reduce the three network configurations and assemble the switching
    /// sequence. Throws ConfigError / DomainError on inconsistency.
    FaultScenario scenario() const;
};

ScenarioConfig parse_scenario(const nlohmann::json& j);
ScenarioConfig load_scenario(const std::filesystem::path& path);

/// Resolved round-trip form: all quantities per-unit tagged, gain in rad/s.
nlohmann::json serialize_scenario(const ScenarioConfig& cfg);

/// FNV-1a 64-bit content digest, hex encoded.
std::string fnv1a64_hex(std::string_view bytes);

} // namespace psctsa
