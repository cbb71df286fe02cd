#include "latsq/trace.hpp"

#include <charconv>
#include <stdexcept>

#include "latsq/numeric.hpp"

namespace latsq {

LocalizationTrace::LocalizationTrace(std::vector<TraceSample> samples)
    : samples_(std::move(samples)) {
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& s = samples_[i];
        if (s.L < 0.0 || s.L > 2.0)
            throw std::invalid_argument("LocalizationTrace: L outside [0, 2]");
        if (i > 0 && s.tau <= samples_[i - 1].tau)
            throw std::invalid_argument("LocalizationTrace: times must be strictly increasing");
    }
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string LocalizationTrace::to_csv() const {
    std::string out = "tau,L\r\n";
    for (const auto& s : samples_) {
        out += format_double(s.tau);
        out += ',';
        out += format_double(s.L);
        out += "\r\n";
    }
    return out;
}

double DensityProfile::integral() const {
    if (grid.size() < 2 || grid.size() != f.size()) return 0.0;
    const double h = two_pi / static_cast<double>(grid.size());
    NeumaierSum s;
    for (double v : f) s.add(v);
    return s.value() * h;
}

std::string DensityProfile::to_csv() const {
    std::string out = "x,f\r\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        out += format_double(grid[i]);
        out += ',';
        out += format_double(f[i]);
        out += "\r\n";
    }
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> v(n);
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (std::size_t i = 0; i < n; ++i)
        v[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return v;
}

std::vector<double> periodic_grid(std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        v[i] = -pi + two_pi * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    return v;
}

}  // namespace latsq
