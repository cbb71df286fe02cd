#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "latsq/classical.hpp"
#include "latsq/pulse.hpp"
#include "latsq/quantum.hpp"

namespace latsq {

// Deterministic, noise-free propagation surface the schedulers minimize
// over. Both engines expose the same four moves; the classical one runs the
// quadrature ensemble, the quantum one a thermal set of coefficient vectors.
class ScheduleEngine {
public:
    virtual ~ScheduleEngine() = default;
    virtual std::string name() const = 0;
    virtual void reset() = 0;
    virtual void kick(double P) = 0;
    virtual void advance(double dt) = 0;
    // L if the state evolved freely a further dt from now; state unchanged.
    virtual double localization_after(double dt) const = 0;
    double localization() const { return localization_after(0.0); }
    // window that certainly contains the optimal final free evolution
    virtual double scan_window() const = 0;
};

class ClassicalScheduleEngine final : public ScheduleEngine {
public:
    explicit ClassicalScheduleEngine(double sigma, std::size_t n_positions = 2048,
                                     int n_hermite = 64);
    std::string name() const override { return "classical"; }
    void reset() override;
    void kick(double P) override;
    void advance(double dt) override;
    double localization_after(double dt) const override;
    double scan_window() const override { return 8.0; }

private:
    double sigma_;
    std::size_t n_positions_;
    int n_hermite_;
    QuadratureEnsemble ensemble_;
};

class QuantumScheduleEngine final : public ScheduleEngine {
public:
    // expected_total_P sizes the starting basis; it grows on demand.
    QuantumScheduleEngine(double sigma, double expected_total_P, int n_legendre = 64);
    std::string name() const override { return "quantum"; }
    void reset() override;
    void kick(double P) override;
    void advance(double dt) override;
    double localization_after(double dt) const override;
    double scan_window() const override;  // one revival period

private:
    struct Member {
        double weight;
        QuantumState state;
    };
    double sigma_;
    int initial_n_max_;
    int n_legendre_;
    std::vector<Member> members_;
};

std::unique_ptr<ScheduleEngine> make_engine(const std::string& name, double sigma,
                                            double expected_total_P);

struct ScheduleResult {
    PulseSequence sequence;
    double L_min = 1.0;
    double t_min = 0.0;  // absolute time of the post-sequence minimum
    std::string engine;
    std::vector<double> per_kick_minima;  // accumulative scheduler only
    long evaluations = 0;
    std::vector<double> start_best;  // optimizer: best value per start

    // Wait time after each kick: inter-kick delays plus the final
    // free-evolution time to the minimum, one entry per kick.
    std::vector<double> delays() const;
    double final_delay() const { return t_min - sequence.last_time(); }

    std::string to_json() const;
};

struct AccumulativeOptions {
    double scan_step = 0.01;   // forward-scan resolution in engine time units
    double scan_tol = 1e-6;    // golden-section width at termination
    double scan_max = 40.0;    // give up bracketing a dip beyond this
    bool revival_shift = false;  // add 4 pi between kicks (quantum only)
};

// Greedy accumulative squeezing: each kick lands at the first local minimum
// of L after the previous kick. Returns the schedule and per-kick minima.
ScheduleResult accumulative_schedule(ScheduleEngine& engine, double P, int kick_count,
                                     const AccumulativeOptions& opts = {});

struct FixedNOptions {
    int starts = 64;          // multi-start count (includes the greedy seed)
    double lhs_upper = 4.0;   // Latin-hypercube upper bound per coordinate
    double snap_threshold = 1e-3;  // snap smaller delays onto the 0 boundary
    double final_scan_step = 0.01;
    AccumulativeOptions seed_options{};
};

// Best schedule of n kicks of strength P found by multi-start Nelder-Mead
// over the n-1 inter-kick delays plus the final free-evolution time, each
// clamped to >= 0. One start is the accumulative schedule, so the result can
// never be worse than greedy. Deterministic in (seed, budget).
ScheduleResult optimize_fixed_n(ScheduleEngine& engine, double P, int n, long budget,
                                std::uint64_t seed, const FixedNOptions& opts = {});

struct TwoKickOptions {
    double tf_window = 4.0 * 3.141592653589793238462643383279502884;  // revival period
    // Delay windows wider than about a quarter revival admit schedules that
    // ride fractional revivals; the sweep tracks the plain two-pulse optimum,
    // so the delay is capped at min(quarter revival, twice the classical
    // two-pulse delay 1.4/P), i.e. min(pi, delay_cap_scale / P).
    double delay_cap_scale = 2.8;
    double coarse_step = 0.02;
    double tf_step = 0.01;
};

// Optimal pair of identical kicks for each strength in the grid, sigma = 0
// by default (general sigma supported). Returns one result per grid entry.
std::vector<ScheduleResult> optimize_two_kick_quantum(double sigma,
                                                      std::span<const double> P_grid,
                                                      long budget, std::uint64_t seed,
                                                      const TwoKickOptions& opts = {});

}  // namespace latsq
