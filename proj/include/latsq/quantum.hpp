#pragma once

#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "latsq/pulse.hpp"
#include "latsq/trace.hpp"

namespace latsq {

// Lattice-periodic state in the truncated plane-wave basis e^{i(n + nu0)x},
// n in [-n_max, n_max]. The quasimomentum nu0 in [-1/2, 1/2) is conserved by
// both free flight and kicks, so it labels an independent sector.
struct QuantumState {
    std::vector<std::complex<double>> c;  // index i holds n = i - n_max
    double nu0 = 0.0;
    int n_max = 0;

    std::complex<double>& at(int n) { return c[static_cast<std::size_t>(n + n_max)]; }
    const std::complex<double>& at(int n) const { return c[static_cast<std::size_t>(n + n_max)]; }
    double norm_squared() const;
};

struct BasisTooSmall : std::runtime_error {
    explicit BasisTooSmall(int suggested)
        : std::runtime_error("kick pushed amplitude to the basis edge; need n_max >= " +
                             std::to_string(suggested)),
          suggested_n_max(suggested) {}
    int suggested_n_max;
};

struct QuadratureNotConverged : std::runtime_error {
    QuadratureNotConverged(double achieved, double target)
        : std::runtime_error("thermal quadrature stalled at " + std::to_string(achieved) +
                             " (target " + std::to_string(target) + ")"),
          achieved_tolerance(achieved) {}
    double achieved_tolerance;
};

// Plane wave of integer momentum offset n0 in the nu0 sector.
QuantumState plane_wave(int n0, double nu0, int n_max);

// Bandwidth of the kick kernel: J_k(P) is negligible beyond |k| ~ P, with a
// super-exponential tail; the padding keeps the truncation below 1e-10.
int kick_bandwidth(double P);

// Basis half-width that holds an initial offset n0 through kicks of total
// strength total_P.
int required_n_max(int n0, double total_P);

// Free flight for dtau: c_n *= exp(-i (n + nu0)^2 dtau / 2).
void free_evolve_in_place(QuantumState& s, double dtau);
QuantumState free_evolve(QuantumState s, double dtau);

// Instantaneous kick of strength P: c_n <- sum_m i^{n-m} J_{n-m}(P) c_m
// (the Fourier image of multiplying by e^{i P cos x}). Throws BasisTooSmall
// if the edge coefficients come out above the truncation-health bound.
void kick_in_place(QuantumState& s, double P);
QuantumState kick(QuantumState s, double P);

// Embed the state in a larger basis (coefficients zero-padded).
QuantumState padded(const QuantumState& s, int new_n_max);

inline constexpr double edge_occupancy_bound = 1e-10;

// L = 1 - Re sum_n c_n conj(c_{n+1}) on the current coefficients.
double localization_factor(const QuantumState& s);

// L after a further free flight dt, without mutating the state; the flight
// only rotates each term of the sum by exp(i (n + nu0 + 1/2) dt).
double localization_factor_after(const QuantumState& s, double dt);

// Single kick of strength P at tau = 0 on a plane wave of momentum p0:
// L(tau) = 1 - cos(p0 tau) J_1(2 P sin(tau/2)).
double localization_closed_single_kick(double tau, double P, double p0);

// Thermal average of the above over a Gaussian momentum distribution:
// L(tau) = 1 - exp(-tau^2 sigma^2 / 2) J_1(2 P sin(tau/2)).
double localization_closed_thermal(double tau, double P, double sigma);

// |Psi(x)|^2 on the grid; the quasimomentum phase drops out of the modulus.
DensityProfile spatial_density_quantum(const QuantumState& s, std::span<const double> grid);

// One (n0, nu0) sector of the thermal initial mixture.
struct ThermalMember {
    int n0 = 0;
    double nu0 = 0.0;
    double weight = 0.0;
};

// Momentum sectors covering all but < 1e-10 of the Gaussian mass: integer
// offsets n0 with |n0| <= n0_max crossed with a Gauss-Legendre rule in nu0
// over [-1/2, 1/2).
std::vector<ThermalMember> thermal_members(double sigma, int n_legendre);
int thermal_n0_halfwidth(double sigma);

// Weighted average of per-sector observables over the thermal mixture.
// `run_member` maps (n0, nu0) to a vector of observables; the Legendre rule
// starts at 32 nodes and doubles until the average moves by < tol (throws
// QuadratureNotConverged beyond 512 nodes). sigma = 0 is the single sector
// (0, 0) with weight 1. Deterministic, fixed-order accumulation.
std::vector<double> thermal_average(
    double sigma, std::size_t observable_count,
    const std::function<std::vector<double>(int n0, double nu0)>& run_member,
    double tol = 1e-8);

inline std::vector<double> thermal_average(
    const ThermalSpec& spec, std::size_t observable_count,
    const std::function<std::vector<double>(int n0, double nu0)>& run_member,
    double tol = 1e-8) {
    return thermal_average(spec.sigma, observable_count, run_member, tol);
}

// Thermal-averaged spatial density for a state prepared by `prepare` in each
// sector (prepare receives a fresh plane wave and propagates it).
DensityProfile spatial_density_thermal(
    double sigma, std::span<const double> grid,
    const std::function<QuantumState(int n0, double nu0)>& prepare);

struct BasisPolicy {
    int minimum_n_max = 0;   // lower bound on the basis half-width
    bool auto_grow = true;   // double and retry on BasisTooSmall
    int hard_limit = 16384;  // give up beyond this half-width
};

// Thermal-averaged L at each sample time for a kick sequence. Coincident
// kicks merge; the basis is sized from the total kick strength and grows
// automatically if a kick still reaches the edge.
LocalizationTrace run_quantum(const PulseSequence& sequence, double sigma,
                              std::span<const double> sample_times,
                              const BasisPolicy& policy = {});

// Propagate one sector through a sequence, sampling L at the given times.
std::vector<double> run_quantum_member(const PulseSequence& merged_sequence, int n0, double nu0,
                                       std::span<const double> sample_times,
                                       const BasisPolicy& policy);

}  // namespace latsq
