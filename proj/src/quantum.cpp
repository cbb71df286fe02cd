#include "latsq/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latsq/bessel.hpp"
#include "latsq/numeric.hpp"
#include "latsq/quadrature.hpp"

namespace latsq {

double QuantumState::norm_squared() const {
    NeumaierSum s;
    for (const auto& a : c) s.add(std::norm(a));
    return s.value();
}

QuantumState plane_wave(int n0, double nu0, int n_max) {
    if (std::abs(n0) > n_max) throw std::domain_error("plane_wave: |n0| exceeds n_max");
    if (nu0 < -0.5 || nu0 >= 0.5) throw std::domain_error("plane_wave: nu0 outside [-1/2, 1/2)");
    QuantumState s;
    s.n_max = n_max;
    s.nu0 = nu0;
    s.c.assign(2 * static_cast<std::size_t>(n_max) + 1, {0.0, 0.0});
    s.at(n0) = 1.0;
    return s;
}

int kick_bandwidth(double P) {
    if (P < 0.0) throw std::domain_error("kick strength must be >= 0");
    return static_cast<int>(std::ceil(P + 8.0 * std::cbrt(P) + 10.0));
}

int required_n_max(int n0, double total_P) { return std::abs(n0) + kick_bandwidth(total_P); }

void free_evolve_in_place(QuantumState& s, double dtau) {
    if (dtau < 0.0) throw std::domain_error("free evolution time must be >= 0");
    for (int n = -s.n_max; n <= s.n_max; ++n) {
        const double m = static_cast<double>(n) + s.nu0;
        const double phase = -0.5 * m * m * dtau;
        s.at(n) *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
}

QuantumState free_evolve(QuantumState s, double dtau) {
    free_evolve_in_place(s, dtau);
    return s;
}

namespace {

// i^k for integer k of either sign.
std::complex<double> i_pow(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

// Kernel entries i^k J_k(P) for k in [-w, w], stored at index k + w.
std::vector<std::complex<double>> kick_kernel(double P, int w) {
    const std::vector<double> j = bessel_j_sequence(w, P);
    std::vector<std::complex<double>> ker(2 * static_cast<std::size_t>(w) + 1);
    for (int k = -w; k <= w; ++k) {
        double jk = j[static_cast<std::size_t>(std::abs(k))];
        if (k < 0 && (k % 2) != 0) jk = -jk;  // J_{-k} = (-1)^k J_k
        ker[static_cast<std::size_t>(k + w)] = i_pow(k) * jk;
    }
    return ker;
}

}  // namespace

void kick_in_place(QuantumState& s, double P) {
    const int w = kick_bandwidth(P);
    const auto ker = kick_kernel(P, w);
    const int n_max = s.n_max;
    std::vector<std::complex<double>> out(s.c.size());

    const int total = 2 * n_max + 1;
    const std::size_t n_chunks = (static_cast<std::size_t>(total) + 255) / 256;
    parallel_for_chunks(n_chunks, [&](std::size_t chunk) {
        const int lo = static_cast<int>(chunk) * 256 - n_max;
        const int hi = std::min(n_max, lo + 255);
        for (int n = lo; n <= hi; ++n) {
            const int m_lo = std::max(-n_max, n - w);
            const int m_hi = std::min(n_max, n + w);
            std::complex<double> acc{0.0, 0.0};
            for (int m = m_lo; m <= m_hi; ++m)
                acc += ker[static_cast<std::size_t>(n - m + w)] * s.at(m);
            out[static_cast<std::size_t>(n + n_max)] = acc;
        }
    });
    // edge check before committing, so the caller can enlarge and retry
    const double edge = std::max(std::norm(out.front()), std::norm(out.back()));
    if (edge >= edge_occupancy_bound) throw BasisTooSmall(2 * n_max);
    s.c = std::move(out);
}

QuantumState padded(const QuantumState& s, int new_n_max) {
    if (new_n_max < s.n_max) throw std::domain_error("padded: basis can only grow");
    QuantumState out;
    out.n_max = new_n_max;
    out.nu0 = s.nu0;
    out.c.assign(2 * static_cast<std::size_t>(new_n_max) + 1, {0.0, 0.0});
    for (int n = -s.n_max; n <= s.n_max; ++n) out.at(n) = s.at(n);
    return out;
}

QuantumState kick(QuantumState s, double P) {
    kick_in_place(s, P);
    return s;
}

double localization_factor(const QuantumState& s) { return localization_factor_after(s, 0.0); }

double localization_factor_after(const QuantumState& s, double dt) {
    NeumaierSum re;
    for (int n = -s.n_max; n < s.n_max; ++n) {
        const std::complex<double> b = s.at(n) * std::conj(s.at(n + 1));
        const double phase = (static_cast<double>(n) + s.nu0 + 0.5) * dt;
        re.add(b.real() * std::cos(phase) - b.imag() * std::sin(phase));
    }
    return 1.0 - re.value();
}

double localization_closed_single_kick(double tau, double P, double p0) {
    if (tau < 0.0) throw std::domain_error("tau must be >= 0");
    return 1.0 - std::cos(p0 * tau) * bessel_j1(2.0 * P * std::sin(0.5 * tau));
}

double localization_closed_thermal(double tau, double P, double sigma) {
    if (tau < 0.0) throw std::domain_error("tau must be >= 0");
    if (sigma < 0.0) throw std::domain_error("sigma must be >= 0");
    return 1.0 - std::exp(-0.5 * tau * tau * sigma * sigma) *
                     bessel_j1(2.0 * P * std::sin(0.5 * tau));
}

DensityProfile spatial_density_quantum(const QuantumState& s, std::span<const double> grid) {
    DensityProfile d;
    d.grid.assign(grid.begin(), grid.end());
    d.f.resize(grid.size());
    const std::size_t n_chunks = (grid.size() + 63) / 64;
    parallel_for_chunks(n_chunks, [&](std::size_t c) {
        const std::size_t lo = c * 64;
        const std::size_t hi = std::min(grid.size(), lo + 64);
        for (std::size_t i = lo; i < hi; ++i) {
            // Horner-style phasor accumulation of sum_n c_n e^{inx}
            const std::complex<double> step(std::cos(grid[i]), std::sin(grid[i]));
            std::complex<double> acc{0.0, 0.0};
            for (int n = s.n_max; n >= -s.n_max; --n)
                acc = acc * step + s.at(n);
            d.f[i] = std::norm(acc) / two_pi;
        }
    });
    return d;
}

int thermal_n0_halfwidth(double sigma) {
    if (sigma == 0.0) return 0;
    int n0 = 0;
    // two-sided Gaussian mass beyond n0 + 1/2 below 1e-10
    while (std::erfc((n0 + 0.5) / (sigma * std::sqrt(2.0))) >= 1e-10) ++n0;
    return n0;
}

std::vector<ThermalMember> thermal_members(double sigma, int n_legendre) {
    if (sigma < 0.0) throw std::domain_error("sigma must be >= 0");
    if (sigma == 0.0) return {ThermalMember{0, 0.0, 1.0}};
    const int n0_max = thermal_n0_halfwidth(sigma);
    const QuadratureRule gl = gauss_legendre(n_legendre);
    std::vector<ThermalMember> members;
    members.reserve(static_cast<std::size_t>(2 * n0_max + 1) * gl.nodes.size());
    const double norm = 1.0 / (std::sqrt(two_pi) * sigma);
    for (int n0 = -n0_max; n0 <= n0_max; ++n0) {
        for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
            const double nu0 = 0.5 * gl.nodes[q];  // [-1,1] -> [-1/2, 1/2]
            const double p0 = static_cast<double>(n0) + nu0;
            const double rho = norm * std::exp(-0.5 * p0 * p0 / (sigma * sigma));
            members.push_back(ThermalMember{n0, nu0, rho * 0.5 * gl.weights[q]});
        }
    }
    return members;
}

std::vector<double> thermal_average(
    double sigma, std::size_t observable_count,
    const std::function<std::vector<double>(int n0, double nu0)>& run_member, double tol) {
    if (sigma == 0.0) {
        auto r = run_member(0, 0.0);
        if (r.size() != observable_count)
            throw std::logic_error("thermal_average: member result size mismatch");
        return r;
    }

    auto combine = [&](int n_legendre) {
        const auto members = thermal_members(sigma, n_legendre);
        std::vector<std::vector<double>> results(members.size());
        parallel_for_chunks(members.size(), [&](std::size_t i) {
            results[i] = run_member(members[i].n0, members[i].nu0);
        });
        std::vector<NeumaierSum> acc(observable_count);
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (results[i].size() != observable_count)
                throw std::logic_error("thermal_average: member result size mismatch");
            for (std::size_t k = 0; k < observable_count; ++k)
                acc[k].add(members[i].weight * results[i][k]);
        }
        std::vector<double> out(observable_count);
        for (std::size_t k = 0; k < observable_count; ++k) out[k] = acc[k].value();
        return out;
    };

    std::vector<double> prev = combine(32);
    double achieved = std::numeric_limits<double>::infinity();
    for (int n = 64; n <= 512; n *= 2) {
        std::vector<double> cur = combine(n);
        achieved = 0.0;
        for (std::size_t k = 0; k < observable_count; ++k)
            achieved = std::max(achieved, std::abs(cur[k] - prev[k]));
        if (achieved < tol) return cur;
        prev = std::move(cur);
    }
    throw QuadratureNotConverged(achieved, tol);
}

DensityProfile spatial_density_thermal(
    double sigma, std::span<const double> grid,
    const std::function<QuantumState(int n0, double nu0)>& prepare) {
    const auto values = thermal_average(sigma, grid.size(), [&](int n0, double nu0) {
        const QuantumState s = prepare(n0, nu0);
        return spatial_density_quantum(s, grid).f;
    });
    DensityProfile d;
    d.grid.assign(grid.begin(), grid.end());
    d.f = values;
    return d;
}

std::vector<double> run_quantum_member(const PulseSequence& merged_sequence, int n0, double nu0,
                                       std::span<const double> sample_times,
                                       const BasisPolicy& policy) {
    for (std::size_t i = 1; i < sample_times.size(); ++i)
        if (sample_times[i] <= sample_times[i - 1])
            throw std::domain_error("sample times must be strictly increasing");
    if (!sample_times.empty() && sample_times.front() < 0.0)
        throw std::domain_error("sample times must be >= 0");

    int n_max = std::max(policy.minimum_n_max,
                         required_n_max(n0, merged_sequence.total_strength()));
    for (;;) {
        try {
            QuantumState s = plane_wave(n0, nu0, n_max);
            std::vector<double> out(sample_times.size());
            double now = 0.0;
            std::size_t ik = 0, is = 0;
            const auto& kicks = merged_sequence.kicks();
            while (ik < kicks.size() || is < sample_times.size()) {
                const double t_kick = ik < kicks.size()
                                          ? kicks[ik].tau
                                          : std::numeric_limits<double>::infinity();
                const double t_samp = is < sample_times.size()
                                          ? sample_times[is]
                                          : std::numeric_limits<double>::infinity();
                if (t_kick <= t_samp) {
                    free_evolve_in_place(s, t_kick - now);
                    now = t_kick;
                    kick_in_place(s, kicks[ik].P);
                    ++ik;
                } else {
                    free_evolve_in_place(s, t_samp - now);
                    now = t_samp;
                    out[is] = localization_factor(s);
                    ++is;
                }
            }
            return out;
        } catch (const BasisTooSmall& e) {
            if (!policy.auto_grow || e.suggested_n_max > policy.hard_limit) throw;
            n_max = e.suggested_n_max;
        }
    }
}

LocalizationTrace run_quantum(const PulseSequence& sequence, double sigma,
                              std::span<const double> sample_times, const BasisPolicy& policy) {
    const PulseSequence merged = sequence.merged();
    const auto values =
        thermal_average(sigma, sample_times.size(), [&](int n0, double nu0) {
            return run_quantum_member(merged, n0, nu0, sample_times, policy);
        });
    std::vector<TraceSample> samples(sample_times.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
        samples[i] = TraceSample{sample_times[i], values[i]};
    return LocalizationTrace(std::move(samples));
}

}  // namespace latsq
