#pragma once

#include <span>
#include <vector>

namespace starwave {

// J_0(x) .. J_{q_max}(x) by Miller's backward recurrence, normalized with
// J_0 + 2 sum J_{2q} = 1. Accurate to ~1e-14 absolute for x up to ~1e5.
std::vector<double> bessel_j_sequence(double x, int q_max);

// Least-squares slope of log(y) against log(x). Inputs must be positive.
double fit_loglog_order(std::span<const double> x, std::span<const double> y);

}  // namespace starwave
