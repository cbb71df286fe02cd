#include "latsq/bessel.hpp"

#include <cmath>
#include <stdexcept>

namespace latsq {

namespace {

// Start order for the downward recurrence: high enough that J_M(x) is far
// below double precision relative to the largest member of the sequence.
int miller_start_order(int n_max, double x) {
    const int m0 = std::max(n_max, static_cast<int>(std::ceil(x)));
    int m = m0 + 18 + static_cast<int>(2.0 * std::sqrt(40.0 * m0 + 160.0));
    if (m % 2 != 0) ++m;  // normalization sums even orders
    return m;
}

}  // namespace

std::vector<double> bessel_j_sequence(int n_max, double x) {
    if (n_max < 0) throw std::invalid_argument("bessel_j_sequence: n_max < 0");
    if (x < 0.0) throw std::invalid_argument("bessel_j_sequence: x < 0");

    std::vector<double> j(static_cast<std::size_t>(n_max) + 1, 0.0);
    if (x == 0.0) {
        j[0] = 1.0;
        return j;
    }

    const int m = miller_start_order(n_max, x);
    const double rescale_limit = 1e250;

    double jp = 0.0;       // J_{k+1} (trial)
    double jc = 1e-300;    // J_k (trial)
    double norm = 0.0;     // accumulates J_0 + 2 sum J_{2k}
    for (int k = m; k >= 1; --k) {
        double jm = (2.0 * k / x) * jc - jp;
        jp = jc;
        jc = jm;
        if (k - 1 <= n_max) j[static_cast<std::size_t>(k - 1)] = jc;
        if ((k - 1) % 2 == 0) norm += (k - 1 == 0) ? jc : 2.0 * jc;
        if (std::abs(jc) > rescale_limit) {
            const double inv = 1.0 / rescale_limit;
            jc *= inv;
            jp *= inv;
            norm *= inv;
            for (auto& v : j) v *= inv;
        }
    }
    for (auto& v : j) v /= norm;
    return j;
}

double bessel_j(int n, double x) {
    bool negate = false;
    if (n < 0) {
        n = -n;
        if (n % 2 != 0) negate = !negate;
    }
    if (x < 0.0) {
        x = -x;
        if (n % 2 != 0) negate = !negate;
    }
    const double v = bessel_j_sequence(n, x)[static_cast<std::size_t>(n)];
    return negate ? -v : v;
}

}  // namespace latsq
