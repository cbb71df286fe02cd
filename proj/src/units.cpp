#include "latsq/units.hpp"

#include <cmath>

namespace latsq {

namespace {
void check_common(const PhysicalParams& p) {
    if (p.atomic_mass <= 0.0) throw std::domain_error("atomic_mass must be > 0");
    if (p.laser_wavenumber <= 0.0) throw std::domain_error("laser_wavenumber must be > 0");
    if (p.temperature < 0.0) throw std::domain_error("temperature must be >= 0");
}
}  // namespace

double classical_sigma_from_physical(const PhysicalParams& p) {
    check_common(p);
    if (p.pulse_fluence <= 0.0) throw std::domain_error("pulse_fluence must be > 0");
    return std::sqrt(k_boltzmann * p.temperature * p.atomic_mass) /
           (2.0 * p.laser_wavenumber * p.pulse_fluence);
}

double quantum_sigma_from_physical(const PhysicalParams& p) {
    check_common(p);
    return std::sqrt(k_boltzmann * p.temperature * p.atomic_mass) /
           (2.0 * hbar * p.laser_wavenumber);
}

double potential_depth_from_rabi(const PhysicalParams& p) {
    if (p.detuning <= 0.0) throw std::domain_error("detuning must be > 0 (red-detuned lattice)");
    if (p.rabi_frequency < 0.0) throw std::domain_error("rabi_frequency must be >= 0");
    return hbar * p.rabi_frequency * p.rabi_frequency / (8.0 * p.detuning);
}

}  // namespace latsq
