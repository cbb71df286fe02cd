#pragma once

#include <cmath>
#include <cstddef>
#include <functional>

namespace latsq {

inline constexpr double pi = 3.141592653589793238462643383279502884;
inline constexpr double two_pi = 2.0 * pi;

// Reduce an angle to [-pi, pi); +pi maps to -pi.
inline double wrap_angle(double x) {
    double r = std::remainder(x, two_pi);
    if (r >= pi) r -= two_pi;
    return r;
}

// Neumaier compensated summation.
class NeumaierSum {
public:
    void add(double v) {
        double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Chunk size used by all ensemble reductions. Fixed so that results do not
// depend on how work is split across threads.
inline constexpr std::size_t reduction_chunk = 4096;

// Thread cap shared by all parallel loops. 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Run fn(chunk_index) for each chunk in [0, n_chunks), possibly concurrently.
void parallel_for_chunks(std::size_t n_chunks, const std::function<void(std::size_t)>& fn);

}  // namespace latsq
