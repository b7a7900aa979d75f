#include "psctsa/per_unit.hpp"

#include "psctsa/errors.hpp"

namespace psctsa {

PerUnitBase::PerUnitBase(double s, double v, double f) : s_base(s), v_base(v), f_base(f) {
    if (!(s > 0.0) || !(v > 0.0) || !(f > 0.0)) {
        throw DomainError("per-unit base values must be positive");
    }
}

double to_per_unit(double si_value, SiKind kind, const PerUnitBase& base) {
    switch (kind) {
    case SiKind::Inductance: return base.inductance_to_pu(si_value);
    case SiKind::Power: return base.power_to_pu(si_value);
    case SiKind::Voltage: return base.voltage_to_pu(si_value);
    case SiKind::Gain: return base.gain_to_pu(si_value);
    }
    throw DomainError("unknown SI quantity kind");
}

double from_per_unit(double pu_value, SiKind kind, const PerUnitBase& base) {
    switch (kind) {
    case SiKind::Inductance: return base.inductance_from_pu(pu_value);
    case SiKind::Power: return base.power_from_pu(pu_value);
    case SiKind::Voltage: return base.voltage_from_pu(pu_value);
    case SiKind::Gain: return base.gain_from_pu(pu_value);
    }
    throw DomainError("unknown SI quantity kind");
}

} // namespace psctsa
