#include "latsq/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "latsq/bessel.hpp"
#include "latsq/numeric.hpp"
#include "latsq/quadrature.hpp"
#include "latsq/rng.hpp"

namespace latsq {

namespace {

void check_nonempty(const ClassicalEnsemble& e) {
    if (e.x.empty() || e.x.size() != e.v.size())
        throw std::domain_error("ensemble must be non-empty with matching x/v lengths");
}

// Deterministic chunked reduction over f(i); one Neumaier sum per fixed-size
// chunk, combined in index order.
template <class F>
double chunked_reduce(std::size_t n, F&& f) {
    const std::size_t n_chunks = (n + reduction_chunk - 1) / reduction_chunk;
    std::vector<double> partial(n_chunks, 0.0);
    parallel_for_chunks(n_chunks, [&](std::size_t c) {
        const std::size_t lo = c * reduction_chunk;
        const std::size_t hi = std::min(n, lo + reduction_chunk);
        NeumaierSum s;
        for (std::size_t i = lo; i < hi; ++i) s.add(f(i));
        partial[c] = s.value();
    });
    NeumaierSum total;
    for (double p : partial) total.add(p);
    return total.value();
}

}  // namespace

void kick_in_place(ClassicalEnsemble& e, double P) {
    if (P < 0.0) throw std::domain_error("kick strength must be >= 0");
    const std::size_t n = e.x.size();
    const std::size_t n_chunks = (n + reduction_chunk - 1) / reduction_chunk;
    parallel_for_chunks(n_chunks, [&](std::size_t c) {
        const std::size_t lo = c * reduction_chunk;
        const std::size_t hi = std::min(n, lo + reduction_chunk);
        for (std::size_t i = lo; i < hi; ++i) e.v[i] -= P * std::sin(e.x[i]);
    });
}

ClassicalEnsemble kick(ClassicalEnsemble e, double P) {
    kick_in_place(e, P);
    return e;
}

void drift_in_place(ClassicalEnsemble& e, double dtau) {
    if (dtau < 0.0) throw std::domain_error("drift time must be >= 0");
    const std::size_t n = e.x.size();
    const std::size_t n_chunks = (n + reduction_chunk - 1) / reduction_chunk;
    parallel_for_chunks(n_chunks, [&](std::size_t c) {
        const std::size_t lo = c * reduction_chunk;
        const std::size_t hi = std::min(n, lo + reduction_chunk);
        for (std::size_t i = lo; i < hi; ++i) e.x[i] = wrap_angle(e.x[i] + e.v[i] * dtau);
    });
}

ClassicalEnsemble drift(ClassicalEnsemble e, double dtau) {
    drift_in_place(e, dtau);
    return e;
}

ClassicalEnsemble sample_thermal(std::size_t n, double sigma, std::uint64_t seed) {
    if (n == 0) throw std::domain_error("sample_thermal: n must be >= 1");
    if (sigma < 0.0) throw std::domain_error("sample_thermal: sigma must be >= 0");
    ClassicalEnsemble e;
    e.rng_seed = seed;
    e.x.resize(n);
    e.v.resize(n);
    Xoshiro256pp rng(seed);
    for (std::size_t i = 0; i < n; ++i) e.x[i] = rng.uniform_angle();
    if (sigma == 0.0) {
        std::fill(e.v.begin(), e.v.end(), 0.0);
    } else {
        for (std::size_t i = 0; i < n; ++i) e.v[i] = sigma * rng.gaussian();
    }
    return e;
}

CosStats cos_statistics(const ClassicalEnsemble& e) {
    check_nonempty(e);
    const std::size_t n = e.x.size();
    const double mean = chunked_reduce(n, [&](std::size_t i) { return std::cos(e.x[i]); }) /
                        static_cast<double>(n);
    const double var =
        chunked_reduce(n,
                       [&](std::size_t i) {
                           const double d = std::cos(e.x[i]) - mean;
                           return d * d;
                       }) /
        static_cast<double>(n);
    return CosStats{mean, std::sqrt(std::max(var, 0.0))};
}

double localization_factor_mc(const ClassicalEnsemble& e) { return 1.0 - cos_statistics(e).mean; }

double localization_factor_closed(double tau, double sigma) {
    if (tau < 0.0) throw std::domain_error("localization_factor_closed: tau must be >= 0");
    return 1.0 - std::exp(-0.5 * sigma * sigma * tau * tau) * bessel_j1(tau);
}

std::pair<double, double> rainbow_positions(double tau) {
    if (tau < 1.0) throw std::domain_error("rainbow_positions: peaks exist only for tau >= 1");
    const double a = std::acos(1.0 / tau);
    const double s = std::sqrt(tau * tau - 1.0);
    return {wrap_angle(a - s), wrap_angle(-a + s)};
}

std::vector<double> branch_roots(double tau, double x) {
    if (tau < 0.0) throw std::domain_error("branch_roots: tau must be >= 0");
    x = wrap_angle(x);
    const auto g = [tau](double x0) { return x0 - tau * std::sin(x0); };

    // g maps [-pi, pi] into [-(pi + tau), pi + tau]; solve g(x0) = x + 2 pi k
    // for every wrap k whose target lies in that range.
    const double reach = pi + tau;
    const int k_lo = static_cast<int>(std::ceil((-reach - x) / two_pi));
    const int k_hi = static_cast<int>(std::floor((reach - x) / two_pi));

    const int n_scan = 4 * static_cast<int>(std::ceil(std::max(tau, 1.0))) + 64;
    std::vector<double> roots;
    for (int k = k_lo; k <= k_hi; ++k) {
        const double y = x + two_pi * k;
        double a = -pi;
        double ga = g(a) - y;
        for (int j = 1; j <= n_scan; ++j) {
            const double b = -pi + two_pi * static_cast<double>(j) / n_scan;
            const double gb = g(b) - y;
            if (ga == 0.0) roots.push_back(a);
            if ((ga < 0.0 && gb > 0.0) || (ga > 0.0 && gb < 0.0)) {
                double lo = a, hi = b, glo = ga;
                for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = g(mid) - y;
                    if ((glo < 0.0) == (gm < 0.0)) {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push_back(0.5 * (lo + hi));
            }
            a = b;
            ga = gb;
        }
    }
    // the domain is half-open: a root at exactly +pi is the -pi root again
    std::erase_if(roots, [](double r) { return r >= pi - 1e-13; });
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double p, double q) { return std::abs(p - q) < 1e-10; }),
                roots.end());
    return roots;
}

namespace {

DensityProfile density_zero_temperature(double tau, std::span<const double> grid) {
    DensityProfile d;
    d.grid.assign(grid.begin(), grid.end());
    d.f.resize(grid.size());
    const std::size_t n_chunks = (grid.size() + 63) / 64;
    parallel_for_chunks(n_chunks, [&](std::size_t c) {
        const std::size_t lo = c * 64;
        const std::size_t hi = std::min(grid.size(), lo + 64);
        for (std::size_t i = lo; i < hi; ++i) {
            double f = 0.0;
            for (double x0 : branch_roots(tau, grid[i])) {
                const double jac = std::abs(1.0 - tau * std::cos(x0));
                f += 1.0 / (two_pi * std::max(jac, caustic_epsilon));
            }
            d.f[i] = f;
        }
    });
    return d;
}

DensityProfile density_thermal(double tau, double sigma, std::span<const double> grid) {
    DensityProfile prev;
    for (int n_nodes = 64; n_nodes <= 512; n_nodes *= 2) {
        const QuadratureRule gh = gauss_hermite(n_nodes);
        // weight and integrand exponent combine to <= 0, so a single exp
        // never overflows even where the weights underflow in linear form
        const std::vector<double>& log_w = gh.log_weights;
        DensityProfile d;
        d.grid.assign(grid.begin(), grid.end());
        d.f.resize(grid.size());
        const double sqrt2sigma = std::sqrt(2.0) * sigma;
        const double inv_two_sigma2 = 1.0 / (2.0 * sigma * sigma);
        const std::size_t n_chunks = (grid.size() + 63) / 64;
        parallel_for_chunks(n_chunks, [&](std::size_t c) {
            const std::size_t lo = c * 64;
            const std::size_t hi = std::min(grid.size(), lo + 64);
            for (std::size_t i = lo; i < hi; ++i) {
                const double x = grid[i];
                NeumaierSum s;
                for (int q = 0; q < n_nodes; ++q) {
                    const double v = sqrt2sigma * gh.nodes[static_cast<std::size_t>(q)];
                    const double sn = std::sin(x - v * tau);
                    s.add(std::exp(log_w[static_cast<std::size_t>(q)] -
                                   (2.0 * v * sn + sn * sn) * inv_two_sigma2));
                }
                d.f[i] = s.value() / (two_pi * std::sqrt(pi));
            }
        });
        if (!prev.f.empty()) {
            double fmax = 0.0;
            for (double v : d.f) fmax = std::max(fmax, std::abs(v));
            double max_rel = 0.0;
            for (std::size_t i = 0; i < d.f.size(); ++i) {
                const double denom = std::max(std::abs(d.f[i]), 1e-8 * fmax);
                max_rel = std::max(max_rel, std::abs(d.f[i] - prev.f[i]) / denom);
            }
            if (max_rel < 1e-8) return d;
        }
        prev = std::move(d);
    }
    throw std::runtime_error("spatial_density: velocity quadrature did not settle at 512 nodes");
}

}  // namespace

DensityProfile spatial_density(double tau, double sigma, std::span<const double> grid) {
    if (tau < 0.0) throw std::domain_error("spatial_density: tau must be >= 0");
    if (sigma < 0.0) throw std::domain_error("spatial_density: sigma must be >= 0");
    if (sigma == 0.0) return density_zero_temperature(tau, grid);
    return density_thermal(tau, sigma, grid);
}

namespace {

// Shared event walk: kicks (merged) and sample times interleaved in time
// order; kicks apply first at coincident times (L depends only on x, so the
// order is unobservable in the trace).
template <class OnSample>
void propagate(ClassicalEnsemble& e, const PulseSequence& sequence,
               std::span<const double> sample_times, OnSample&& on_sample) {
    for (std::size_t i = 1; i < sample_times.size(); ++i)
        if (sample_times[i] <= sample_times[i - 1])
            throw std::domain_error("sample times must be strictly increasing");
    if (!sample_times.empty() && sample_times.front() < 0.0)
        throw std::domain_error("sample times must be >= 0");

    const PulseSequence seq = sequence.merged();
    double now = 0.0;
    std::size_t ik = 0, is = 0;
    const auto& kicks = seq.kicks();
    while (ik < kicks.size() || is < sample_times.size()) {
        const double t_kick = ik < kicks.size() ? kicks[ik].tau
                                                : std::numeric_limits<double>::infinity();
        const double t_samp = is < sample_times.size()
                                  ? sample_times[is]
                                  : std::numeric_limits<double>::infinity();
        if (t_kick <= t_samp) {
            drift_in_place(e, t_kick - now);
            now = t_kick;
            kick_in_place(e, kicks[ik].P);
            ++ik;
        } else {
            drift_in_place(e, t_samp - now);
            now = t_samp;
            on_sample(is, e);
            ++is;
        }
    }
}

}  // namespace

LocalizationTrace run_classical(const PulseSequence& sequence, double sigma, std::size_t n,
                                std::span<const double> sample_times, std::uint64_t seed) {
    ClassicalEnsemble e = sample_thermal(n, sigma, seed);
    std::vector<TraceSample> samples(sample_times.size());
    propagate(e, sequence, sample_times, [&](std::size_t i, const ClassicalEnsemble& ens) {
        samples[i] = TraceSample{sample_times[i], localization_factor_mc(ens)};
    });
    return LocalizationTrace(std::move(samples));
}

std::vector<ClassicalEnsemble> classical_snapshots(const PulseSequence& sequence, double sigma,
                                                   std::size_t n,
                                                   std::span<const double> sample_times,
                                                   std::uint64_t seed) {
    ClassicalEnsemble e = sample_thermal(n, sigma, seed);
    std::vector<ClassicalEnsemble> out(sample_times.size());
    propagate(e, sequence, sample_times,
              [&](std::size_t i, const ClassicalEnsemble& ens) { out[i] = ens; });
    return out;
}

DensityProfile histogram_density(const ClassicalEnsemble& e, std::size_t n_bins) {
    check_nonempty(e);
    DensityProfile d;
    d.grid = periodic_grid(n_bins);
    d.f.assign(n_bins, 0.0);
    const double h = two_pi / static_cast<double>(n_bins);
    for (double x : e.x) {
        auto b = static_cast<std::size_t>((wrap_angle(x) + pi) / h);
        if (b >= n_bins) b = n_bins - 1;
        d.f[b] += 1.0;
    }
    const double norm = static_cast<double>(e.x.size()) * h;
    for (auto& f : d.f) f /= norm;
    return d;
}

QuadratureEnsemble::QuadratureEnsemble(double sigma, std::size_t n_positions, int n_hermite) {
    if (sigma < 0.0) throw std::domain_error("QuadratureEnsemble: sigma must be >= 0");
    if (n_positions < 2) throw std::domain_error("QuadratureEnsemble: need at least 2 positions");
    const std::vector<double> xs = periodic_grid(n_positions);
    if (sigma == 0.0) {
        x_ = xs;
        v_.assign(n_positions, 0.0);
        w_.assign(n_positions, 1.0 / static_cast<double>(n_positions));
        return;
    }
    const QuadratureRule gh = gauss_hermite(n_hermite);
    const double sqrt2sigma = std::sqrt(2.0) * sigma;
    x_.reserve(n_positions * static_cast<std::size_t>(n_hermite));
    v_.reserve(x_.capacity());
    w_.reserve(x_.capacity());
    for (double x : xs) {
        for (int q = 0; q < n_hermite; ++q) {
            x_.push_back(x);
            v_.push_back(sqrt2sigma * gh.nodes[static_cast<std::size_t>(q)]);
            w_.push_back(gh.weights[static_cast<std::size_t>(q)] /
                         (std::sqrt(pi) * static_cast<double>(n_positions)));
        }
    }
}

void QuadratureEnsemble::kick(double P) {
    const std::size_t n = x_.size();
    const std::size_t n_chunks = (n + reduction_chunk - 1) / reduction_chunk;
    parallel_for_chunks(n_chunks, [&](std::size_t c) {
        const std::size_t lo = c * reduction_chunk;
        const std::size_t hi = std::min(n, lo + reduction_chunk);
        for (std::size_t i = lo; i < hi; ++i) v_[i] -= P * std::sin(x_[i]);
    });
}

void QuadratureEnsemble::drift(double dtau) {
    if (dtau < 0.0) throw std::domain_error("drift time must be >= 0");
    const std::size_t n = x_.size();
    const std::size_t n_chunks = (n + reduction_chunk - 1) / reduction_chunk;
    parallel_for_chunks(n_chunks, [&](std::size_t c) {
        const std::size_t lo = c * reduction_chunk;
        const std::size_t hi = std::min(n, lo + reduction_chunk);
        for (std::size_t i = lo; i < hi; ++i) x_[i] = wrap_angle(x_[i] + v_[i] * dtau);
    });
}

double QuadratureEnsemble::localization_after(double dt) const {
    const std::size_t n = x_.size();
    return 1.0 - chunked_reduce(n, [&](std::size_t i) {
               return w_[i] * std::cos(x_[i] + v_[i] * dt);
           });
}

}  // namespace latsq
