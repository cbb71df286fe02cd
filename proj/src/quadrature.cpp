#include "latsq/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "latsq/numeric.hpp"

namespace latsq {

QuadratureRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n < 1");
    QuadratureRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-like initial guess, then Newton on P_n.
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * z * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        r.nodes[static_cast<std::size_t>(i)] = -z;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        const double w = 2.0 / ((1.0 - z * z) * pp * pp);
        r.weights[static_cast<std::size_t>(i)] = w;
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return r;
}

namespace {

// Orthonormal Hermite function h_n(z) = p_n(z) exp(-z^2/2) and h_{n-1},
// via the same three-term recurrence as the polynomials. The functions stay
// bounded, so the evaluation cannot overflow; the exp(-z^2/2) start stays
// above the double-precision floor for the node range of n <= 512.
struct HermitePair {
    double h_n;
    double h_nm1;
};

HermitePair hermite_function(int n, double z) {
    const double pim4 = 0.7511255444649425;  // pi^(-1/4)
    double h0 = pim4 * std::exp(-0.5 * z * z);
    double h1 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double h2 = h1;
        h1 = h0;
        h0 = z * std::sqrt(2.0 / (k + 1.0)) * h1 - std::sqrt(static_cast<double>(k) / (k + 1.0)) * h2;
    }
    return {h0, h1};
}

}  // namespace

QuadratureRule gauss_hermite(int n) {
    if (n < 1) throw std::invalid_argument("gauss_hermite: n < 1");
    if (n > 512) throw std::invalid_argument("gauss_hermite: rules above n = 512 not supported");
    QuadratureRule r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    r.log_weights.resize(static_cast<std::size_t>(n));
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // Standard initial guesses for the largest roots, then stepping
        // inward from the previously found ones.
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * r.nodes[static_cast<std::size_t>(n - 1)];
        else if (i == 3)
            z = 1.91 * z - 0.91 * r.nodes[static_cast<std::size_t>(n - 2)];
        else
            z = 2.0 * z - r.nodes[static_cast<std::size_t>(n - i + 1)];

        HermitePair h{0.0, 0.0};
        for (int it = 0; it < 200; ++it) {
            h = hermite_function(n, z);
            // h_n'(z) = sqrt(2n) h_{n-1}(z) - z h_n(z)
            const double deriv = std::sqrt(2.0 * n) * h.h_nm1 - z * h.h_n;
            const double dz = h.h_n / deriv;
            z -= dz;
            if (std::abs(dz) < 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        h = hermite_function(n, z);
        // w = 2 / (sqrt(2n) p_{n-1})^2 with p = h exp(+z^2/2)
        const double log_w =
            std::log(2.0) - std::log(2.0 * n) - 2.0 * std::log(std::abs(h.h_nm1)) - z * z;
        r.nodes[static_cast<std::size_t>(n - 1 - i)] = z;
        r.nodes[static_cast<std::size_t>(i)] = -z;
        r.log_weights[static_cast<std::size_t>(n - 1 - i)] = log_w;
        r.log_weights[static_cast<std::size_t>(i)] = log_w;
        const double w = std::exp(log_w);
        r.weights[static_cast<std::size_t>(n - 1 - i)] = w;
        r.weights[static_cast<std::size_t>(i)] = w;
    }
    if (n % 2 == 1) r.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return r;
}

}  // namespace latsq
