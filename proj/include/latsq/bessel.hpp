#pragma once

#include <vector>

namespace latsq {

// Bessel functions of the first kind, integer order, real argument.
//
// Evaluated by Miller's algorithm: downward three-term recurrence
// J_{k-1}(x) = (2k/x) J_k(x) - J_{k+1}(x) from a start order where J is
// negligible, normalized with J_0(x) + 2 sum_{k>=1} J_{2k}(x) = 1. The
// downward direction is the numerically stable one for J, so the whole
// sequence comes out with near machine-epsilon absolute accuracy, which is
// what the kick kernel needs (its unitarity rests on sum_k J_k(P)^2 = 1).

// J_0(x), J_1(x), ..., J_{n_max}(x) for x >= 0.
std::vector<double> bessel_j_sequence(int n_max, double x);

// J_n(x) for any integer order and real argument,
// via J_n(-x) = (-1)^n J_n(x) and J_{-n}(x) = (-1)^n J_n(x).
double bessel_j(int n, double x);

inline double bessel_j0(double x) { return bessel_j(0, x); }
inline double bessel_j1(double x) { return bessel_j(1, x); }

}  // namespace latsq
