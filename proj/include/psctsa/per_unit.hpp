#pragma once

#include <numbers>

namespace psctsa {

/// SI <-> per-unit conversion anchor for a single-converter infinite-bus
/// system. Voltage base is the peak phase voltage, so the impedance base
/// carries the 3/2 factor of the three-phase power transfer relation.
struct PerUnitBase {
    double s_base; ///< power base [W]
    double v_base; ///< peak phase voltage base [V]
    double f_base; ///< frequency base [Hz]

    PerUnitBase(double s, double v, double f);

    double omega_base() const { return 2.0 * std::numbers::pi * f_base; }
    double z_base() const { return 3.0 * v_base * v_base / (2.0 * s_base); }

    /// Inductance [H] -> reactance [pu] at the base frequency.
    double inductance_to_pu(double henry) const { return omega_base() * henry / z_base(); }
    double inductance_from_pu(double x_pu) const { return x_pu * z_base() / omega_base(); }

    double power_to_pu(double watt) const { return watt / s_base; }
    double power_from_pu(double p_pu) const { return p_pu * s_base; }

    double voltage_to_pu(double volt_peak) const { return volt_peak / v_base; }
    double voltage_from_pu(double v_pu) const { return v_pu * v_base; }

    /// Synchronization gain K_i [rad/(W*s)] -> effective gain k [rad/s per pu power].
    double gain_to_pu(double ki_si) const { return ki_si * s_base; }
    double gain_from_pu(double k_pu) const { return k_pu / s_base; }
};

enum class SiKind { Inductance, Power, Voltage, Gain };

double to_per_unit(double si_value, SiKind kind, const PerUnitBase& base);
double from_per_unit(double pu_value, SiKind kind, const PerUnitBase& base);

} // namespace psctsa
