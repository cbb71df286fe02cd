#pragma once

#include <string>
#include <vector>

namespace latsq {

struct TraceSample {
    double tau = 0.0;
    double L = 0.0;  // localization factor, 1 - <cos x>, in [0, 2]
};

// Sampled localization factor of one run. Times strictly increasing.
class LocalizationTrace {
public:
    LocalizationTrace() = default;
    explicit LocalizationTrace(std::vector<TraceSample> samples);

    const std::vector<TraceSample>& samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }

    // CSV with header "tau,L", RFC 4180 line endings, 17 significant digits.
    std::string to_csv() const;

private:
    std::vector<TraceSample> samples_;
};

// Spatial probability density on a position grid in [-pi, pi).
struct DensityProfile {
    std::vector<double> grid;
    std::vector<double> f;

    // Periodic rectangle-rule integral over [-pi, pi) assuming a uniform grid.
    double integral() const;

    // CSV with header "x,f".
    std::string to_csv() const;
};

// Locale-independent shortest-faithful formatting, 17 significant digits.
std::string format_double(double v);

// Uniform grid of n points covering [lo, hi] inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

// Uniform midpoint grid of n cells over [-pi, pi).
std::vector<double> periodic_grid(std::size_t n);

}  // namespace latsq
