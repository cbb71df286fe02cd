#pragma once

#include <vector>

namespace latsq {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    // natural logs of the weights; filled for Hermite rules, where extreme
    // weights underflow in linear representation
    std::vector<double> log_weights;
};

// Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

// Gauss-Hermite rule for the weight exp(-t^2) on (-inf, inf), n <= 512.
// For a Gaussian average with standard deviation sigma, substitute
// v = sqrt(2) sigma t and divide the weight sum by sqrt(pi).
QuadratureRule gauss_hermite(int n);

}  // namespace latsq
