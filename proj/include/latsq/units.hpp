#pragma once

#include <stdexcept>

namespace latsq {

// 2019 SI values.
inline constexpr double k_boltzmann = 1.380649e-23;      // J/K (exact)
inline constexpr double hbar = 1.054571817e-34;          // J s

// Laboratory-frame parameters of the atom + standing-wave system. All
// simulation code works in dimensionless units; these enter only through the
// conversions below.
struct PhysicalParams {
    double atomic_mass = 0.0;       // kg
    double laser_wavenumber = 0.0;  // 1/m
    double detuning = 0.0;          // rad/s, red detuning is positive
    double rabi_frequency = 0.0;    // rad/s
    double temperature = 0.0;       // K
    double pulse_fluence = 0.0;     // J s, time-integrated potential depth
};

// Dimensionless thermal width of the classical velocity distribution:
// sigma_cl = sqrt(k_B T m) / (2 k_l * fluence).
double classical_sigma_from_physical(const PhysicalParams& p);

// Dimensionless thermal width of the quantum momentum distribution:
// sigma_qm = sqrt(k_B T m) / (2 hbar k_l).
double quantum_sigma_from_physical(const PhysicalParams& p);

// Depth of the standing-wave potential for a two-level atom far off
// resonance: V = hbar Omega^2 / (8 Delta). Blue detuning (Delta <= 0) is out
// of scope and rejected.
double potential_depth_from_rabi(const PhysicalParams& p);

}  // namespace latsq
