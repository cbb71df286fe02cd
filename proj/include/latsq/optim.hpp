#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace latsq {

using Objective1D = std::function<double(double)>;
using ObjectiveND = std::function<double(const std::vector<double>&)>;

struct BracketError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScalarMin {
    double x = 0.0;
    double f = 0.0;
    long evaluations = 0;
};

// Golden-section minimization on [a, b]; assumes a single interior minimum.
ScalarMin golden_section(const Objective1D& f, double a, double b, double xtol = 1e-6);

// Walk forward from t0 in steps of `step` until the function has descended
// and then risen, then refine the bracketed dip by golden section. Throws
// BracketError if no dip appears before t0 + tmax.
ScalarMin first_local_min(const Objective1D& f, double t0, double step, double tmax,
                          double xtol = 1e-6);

// Global scan on [a, b] with the given step, refined around the best grid
// point. Ties on the grid resolve to the earliest point.
ScalarMin scan_min(const Objective1D& f, double a, double b, double step, double xtol = 1e-6);

struct SimplexResult {
    std::vector<double> x;
    double f = 0.0;
    long evaluations = 0;
};

struct SimplexOptions {
    long max_evaluations = 4000;
    double xatol = 1e-8;
    double fatol = 1e-12;
    double initial_step = 0.25;
};

// Nelder-Mead downhill simplex (reflection/expansion/contraction/shrink).
SimplexResult nelder_mead(const ObjectiveND& f, const std::vector<double>& x0,
                          const SimplexOptions& opts = {});

// Latin hypercube sample of `count` points in [lo, hi]^dim, deterministic in
// the seed.
std::vector<std::vector<double>> latin_hypercube(int count, int dim, double lo, double hi,
                                                 std::uint64_t seed);

}  // namespace latsq
