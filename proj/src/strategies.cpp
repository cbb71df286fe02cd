#include "latsq/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "latsq/numeric.hpp"
#include "latsq/optim.hpp"

namespace latsq {

ClassicalScheduleEngine::ClassicalScheduleEngine(double sigma, std::size_t n_positions,
                                                 int n_hermite)
    : sigma_(sigma),
      n_positions_(n_positions),
      n_hermite_(n_hermite),
      ensemble_(sigma, n_positions, n_hermite) {}

void ClassicalScheduleEngine::reset() {
    ensemble_ = QuadratureEnsemble(sigma_, n_positions_, n_hermite_);
}

void ClassicalScheduleEngine::kick(double P) { ensemble_.kick(P); }

void ClassicalScheduleEngine::advance(double dt) { ensemble_.drift(dt); }

double ClassicalScheduleEngine::localization_after(double dt) const {
    return ensemble_.localization_after(dt);
}

QuantumScheduleEngine::QuantumScheduleEngine(double sigma, double expected_total_P,
                                             int n_legendre)
    : sigma_(sigma),
      initial_n_max_(required_n_max(thermal_n0_halfwidth(sigma), expected_total_P)),
      n_legendre_(n_legendre) {
    reset();
}

void QuantumScheduleEngine::reset() {
    members_.clear();
    for (const auto& m : thermal_members(sigma_, n_legendre_))
        members_.push_back(Member{m.weight, plane_wave(m.n0, m.nu0, initial_n_max_)});
}

void QuantumScheduleEngine::kick(double P) {
    parallel_for_chunks(members_.size(), [&](std::size_t i) {
        for (;;) {
            try {
                kick_in_place(members_[i].state, P);
                return;
            } catch (const BasisTooSmall& e) {
                if (e.suggested_n_max > 16384) throw;
                members_[i].state = padded(members_[i].state, e.suggested_n_max);
            }
        }
    });
}

void QuantumScheduleEngine::advance(double dt) {
    for (auto& m : members_) free_evolve_in_place(m.state, dt);
}

double QuantumScheduleEngine::localization_after(double dt) const {
    NeumaierSum s;
    for (const auto& m : members_)
        s.add(m.weight * latsq::localization_factor_after(m.state, dt));
    // weights carry the (truncated) Gaussian mass; 1 - <cos x> needs the
    // constant term weighted the same way
    double mass = 0.0;
    for (const auto& m : members_) mass += m.weight;
    return s.value() + (1.0 - mass);
}

double QuantumScheduleEngine::scan_window() const { return 2.0 * two_pi; }

std::unique_ptr<ScheduleEngine> make_engine(const std::string& name, double sigma,
                                            double expected_total_P) {
    if (name == "classical") return std::make_unique<ClassicalScheduleEngine>(sigma);
    if (name == "quantum")
        return std::make_unique<QuantumScheduleEngine>(sigma, expected_total_P);
    throw std::invalid_argument("unknown engine: " + name);
}

std::vector<double> ScheduleResult::delays() const {
    std::vector<double> d;
    const auto& kicks = sequence.kicks();
    for (std::size_t i = 1; i < kicks.size(); ++i) d.push_back(kicks[i].tau - kicks[i - 1].tau);
    d.push_back(final_delay());
    return d;
}

std::string ScheduleResult::to_json() const {
    nlohmann::json j;
    j["engine"] = engine;
    j["sequence"] = nlohmann::json::parse(sequence.to_json());
    j["L_min"] = L_min;
    j["t_min"] = t_min;
    j["delays"] = delays();
    if (!per_kick_minima.empty()) j["per_kick_minima"] = per_kick_minima;
    j["diagnostics"] = {{"evaluations", evaluations}, {"start_best", start_best}};
    return j.dump(2);
}

ScheduleResult accumulative_schedule(ScheduleEngine& engine, double P, int kick_count,
                                     const AccumulativeOptions& opts) {
    if (kick_count < 1) throw std::domain_error("accumulative_schedule: need at least one kick");
    if (P < 0.0) throw std::domain_error("accumulative_schedule: P must be >= 0");
    if (opts.revival_shift && engine.name() != "quantum")
        throw std::domain_error("revival shift only makes sense in quantum time units");

    engine.reset();
    ScheduleResult r;
    r.engine = engine.name();
    std::vector<Kick> kicks;
    double now = 0.0;
    const double shift = opts.revival_shift ? 2.0 * two_pi : 0.0;

    for (int k = 0; k < kick_count; ++k) {
        kicks.push_back(Kick{now, P});
        engine.kick(P);
        const ScalarMin dip = first_local_min(
            [&](double dt) { return engine.localization_after(dt); }, 0.0, opts.scan_step,
            opts.scan_max, opts.scan_tol);
        r.evaluations += dip.evaluations;
        r.per_kick_minima.push_back(dip.f);
        r.L_min = dip.f;
        r.t_min = now + dip.x;
        const double wait = dip.x + (k + 1 < kick_count ? shift : 0.0);
        engine.advance(wait);
        now += wait;
    }
    r.sequence = PulseSequence(std::move(kicks));
    return r;
}

namespace {

// n-kick objective over (d_1 .. d_{n-1}, t_final); negative coordinates are
// clamped to the feasible boundary.
double schedule_objective(ScheduleEngine& engine, double P, const std::vector<double>& params) {
    engine.reset();
    engine.kick(P);
    for (std::size_t i = 0; i + 1 < params.size(); ++i) {
        engine.advance(std::max(params[i], 0.0));
        engine.kick(P);
    }
    return engine.localization_after(std::max(params.back(), 0.0));
}

std::vector<double> clamped(const std::vector<double>& p) {
    std::vector<double> q(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) q[i] = std::max(p[i], 0.0);
    return q;
}

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

ScheduleResult optimize_fixed_n(ScheduleEngine& engine, double P, int n, long budget,
                                std::uint64_t seed, const FixedNOptions& opts) {
    if (n < 1) throw std::domain_error("optimize_fixed_n: need at least one kick");
    if (budget <= 0) throw std::domain_error("optimize_fixed_n: budget must be > 0");

    long evals = 0;
    const auto objective = [&](const std::vector<double>& p) {
        ++evals;
        return schedule_objective(engine, P, p);
    };

    // greedy seed start (also the dominance guarantee)
    const ScheduleResult greedy = accumulative_schedule(engine, P, n, opts.seed_options);
    std::vector<std::vector<double>> starts{greedy.delays()};
    for (auto& pt : latin_hypercube(opts.starts - 1, n, 0.0, opts.lhs_upper, seed))
        starts.push_back(std::move(pt));

    std::vector<double> best_x;
    double best_f = std::numeric_limits<double>::infinity();
    std::vector<double> start_best;
    const long per_start = std::max<long>(budget / opts.starts, 200);

    for (const auto& s : starts) {
        if (evals >= budget && !start_best.empty()) break;
        SimplexOptions so;
        so.max_evaluations = std::min<long>(per_start, std::max<long>(budget - evals, 200));
        so.initial_step = 0.25;
        SimplexResult r = nelder_mead(objective, s, so);
        std::vector<double> x = clamped(r.x);
        double f = r.f;

        // snap near-boundary delays onto the boundary when it costs nothing
        bool snapped = false;
        std::vector<double> xs = x;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            if (xs[i] > 0.0 && xs[i] < opts.snap_threshold) {
                xs[i] = 0.0;
                snapped = true;
            }
        }
        if (snapped) {
            const double fs = objective(xs);
            if (fs <= f + 1e-10) {
                x = xs;
                f = fs;
            }
        }

        start_best.push_back(f);
        if (f < best_f || (f == best_f && lex_less(x, best_x))) {
            best_f = f;
            best_x = x;
        }
    }

    // final-time rescan of the winner: the last coordinate is the one
    // direction where a distant deeper valley is plausible
    {
        std::vector<double> xt = best_x;
        const auto line = [&](double t) {
            xt.back() = t;
            return objective(xt);
        };
        const ScalarMin sm = scan_min(line, 0.0, engine.scan_window(), opts.final_scan_step, 1e-8);
        if (sm.f < best_f) {
            best_x[best_x.size() - 1] = sm.x;
            best_f = sm.f;
        }
    }

    ScheduleResult r;
    r.engine = engine.name();
    r.evaluations = evals;
    r.start_best = std::move(start_best);
    std::vector<Kick> kicks;
    double now = 0.0;
    kicks.push_back(Kick{0.0, P});
    for (std::size_t i = 0; i + 1 < best_x.size(); ++i) {
        now += best_x[i];
        kicks.push_back(Kick{now, P});
    }
    r.sequence = PulseSequence(std::move(kicks));
    r.t_min = now + best_x.back();
    r.L_min = best_f;
    return r;
}

std::vector<ScheduleResult> optimize_two_kick_quantum(double sigma,
                                                      std::span<const double> P_grid,
                                                      long budget, std::uint64_t seed,
                                                      const TwoKickOptions& opts) {
    (void)seed;  // the sweep is scan-based and already deterministic
    std::vector<ScheduleResult> out;
    out.reserve(P_grid.size());

    for (double P : P_grid) {
        if (P <= 0.0) throw std::domain_error("optimize_two_kick_quantum: P must be > 0");
        QuantumScheduleEngine engine(sigma, 2.0 * P);
        long evals = 0;

        // best final-time localization for one inter-kick delay
        const auto inner = [&](double d1) {
            engine.reset();
            engine.kick(P);
            engine.advance(d1);
            engine.kick(P);
            const ScalarMin sm = scan_min(
                [&](double t) {
                    ++evals;
                    return engine.localization_after(t);
                },
                0.0, opts.tf_window, opts.tf_step, 1e-8);
            return sm;
        };

        const double delay_cap = std::min(pi, opts.delay_cap_scale / P);
        double best_d1 = 0.0;
        ScalarMin best = inner(0.0);
        for (double d1 = opts.coarse_step; d1 <= delay_cap + 1e-12; d1 += opts.coarse_step) {
            if (budget > 0 && evals >= budget) break;
            const ScalarMin sm = inner(d1);
            if (sm.f < best.f) {
                best = sm;
                best_d1 = d1;
            }
        }
        // refine the delay around the best coarse point
        const ScalarMin refined = golden_section(
            [&](double d1) { return inner(d1).f; }, std::max(0.0, best_d1 - opts.coarse_step),
            std::min(delay_cap, best_d1 + opts.coarse_step), 1e-6);
        if (refined.f < best.f) {
            best_d1 = refined.x;
            best = inner(best_d1);
        }

        ScheduleResult r;
        r.engine = "quantum";
        r.sequence = PulseSequence({Kick{0.0, P}, Kick{best_d1, P}});
        r.L_min = best.f;
        r.t_min = best_d1 + best.x;
        r.evaluations = evals;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace latsq
