#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "latsq/pulse.hpp"
#include "latsq/trace.hpp"

namespace latsq {

// Monte Carlo ensemble on the periodic cell: positions in [-pi, pi),
// dimensionless velocities.
struct ClassicalEnsemble {
    std::vector<double> x;
    std::vector<double> v;
    std::uint64_t rng_seed = 0;

    std::size_t size() const { return x.size(); }
};

// Instantaneous lattice kick: v' = v - P sin x, positions unchanged.
void kick_in_place(ClassicalEnsemble& e, double P = 1.0);
ClassicalEnsemble kick(ClassicalEnsemble e, double P = 1.0);

// Free flight: x' = x + v dtau, wrapped into [-pi, pi). dtau >= 0.
void drift_in_place(ClassicalEnsemble& e, double dtau);
ClassicalEnsemble drift(ClassicalEnsemble e, double dtau);

// Uniform positions, Gaussian velocities of width sigma (all zero when
// sigma = 0). Deterministic in the seed.
ClassicalEnsemble sample_thermal(std::size_t n, double sigma, std::uint64_t seed);

struct CosStats {
    double mean = 0.0;
    double stddev = 0.0;
};

// Mean and standard deviation of cos x over the ensemble, with deterministic
// chunked compensated summation (independent of thread count).
CosStats cos_statistics(const ClassicalEnsemble& e);

// L = 1 - <cos x> over the ensemble.
double localization_factor_mc(const ClassicalEnsemble& e);

// Closed form for a single kick at tau = 0 acting on a thermal ensemble:
// L(tau) = 1 - exp(-sigma^2 tau^2 / 2) J_1(tau).
double localization_factor_closed(double tau, double sigma);

// Caustic ("rainbow") peak positions after a single kick, defined for
// tau >= 1: x_c = +-acos(1/tau) -+ sqrt(tau^2 - 1), wrapped.
// Returned as {negative-moving, positive-moving} branch.
std::pair<double, double> rainbow_positions(double tau);

// All pre-kick positions x0 in [-pi, pi) that reach x at time tau after a
// single unit kick at tau = 0, i.e. roots of x0 - tau sin x0 = x (mod 2pi).
// Bracketed on a uniform scan grid of 4 ceil(tau) + 64 points per wrap and
// refined by bisection to 1e-12.
std::vector<double> branch_roots(double tau, double x);

// Spatial density at time tau after a single unit kick from the uniform
// thermal state. sigma = 0 uses the branch sum with contributions
// 1/(2pi |1 - tau cos x0|), capped at 1/(2pi eps) within eps = 1e-8 of a
// caustic; sigma > 0 integrates the phase-space density over v by
// Gauss-Hermite quadrature, doubling the rule until the profile moves by
// less than 1e-8.
DensityProfile spatial_density(double tau, double sigma, std::span<const double> grid);

inline constexpr double caustic_epsilon = 1e-8;

// Propagate a thermal ensemble through a kick sequence, recording
// L = 1 - <cos x> at each sample time. Coincident kicks merge.
LocalizationTrace run_classical(const PulseSequence& sequence, double sigma, std::size_t n,
                                std::span<const double> sample_times, std::uint64_t seed);

// Same propagation, returning ensemble snapshots (x, v) at the sample times.
std::vector<ClassicalEnsemble> classical_snapshots(const PulseSequence& sequence, double sigma,
                                                   std::size_t n,
                                                   std::span<const double> sample_times,
                                                   std::uint64_t seed);

// Histogram density estimate from a Monte Carlo ensemble (n_bins uniform
// cells over [-pi, pi)), normalized to unit integral.
DensityProfile histogram_density(const ClassicalEnsemble& e, std::size_t n_bins);

// Deterministic quadrature ensemble over the thermal initial state:
// a midpoint grid in x0 crossed with Gauss-Hermite nodes in v0. Evaluates
// the same kick/drift dynamics with noise-free weights, which is what the
// schedule optimizers minimize.
class QuadratureEnsemble {
public:
    QuadratureEnsemble(double sigma, std::size_t n_positions = 2048, int n_hermite = 64);

    void kick(double P = 1.0);
    void drift(double dtau);
    // L if the ensemble drifted a further dt from now (state unchanged).
    double localization_after(double dt) const;
    double localization() const { return localization_after(0.0); }

    std::size_t size() const { return x_.size(); }

private:
    std::vector<double> x_, v_, w_;
};

}  // namespace latsq
