#include "starwave/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace starwave {

std::vector<double> bessel_j_sequence(double x, int q_max) {
    if (q_max < 0) throw std::invalid_argument("bessel_j_sequence: q_max < 0");
    if (x < 0.0 || !std::isfinite(x))
        throw std::invalid_argument("bessel_j_sequence: x must be finite and >= 0");
    if (x == 0.0) {
        std::vector<double> j(q_max + 1, 0.0);
        j[0] = 1.0;
        return j;
    }

    // The normalization sum needs all even orders with non-negligible J, so
    // the internal array always reaches past the turning point q ~ x. The
    // recurrence starts a further pad above that, deep in the decayed regime,
    // where the seed value is arbitrary.
    const double cbrx = std::cbrt(x);
    const int hi = std::max(q_max, static_cast<int>(x) + 40 + static_cast<int>(12.0 * cbrx));
    const int start = hi + 40 + static_cast<int>(10.0 * cbrx);

    std::vector<double> j(hi + 1, 0.0);
    double jp1 = 0.0;
    double jq = 1e-200;
    for (int q = start; q > hi; --q) {
        const double jm1 = (2.0 * q / x) * jq - jp1;
        jp1 = jq;
        jq = jm1;
    }
    j[hi] = jq;
    if (hi > 0) j[hi - 1] = (2.0 * hi / x) * jq - jp1;
    for (int q = hi - 1; q > 0; --q) j[q - 1] = (2.0 * q / x) * j[q] - j[q + 1];

    double norm = j[0];
    for (int q = 2; q <= hi; q += 2) norm += 2.0 * j[q];
    if (norm == 0.0 || !std::isfinite(norm))
        throw std::runtime_error("bessel_j_sequence: normalization failed");
    for (double& v : j) v /= norm;

    j.resize(q_max + 1);
    return j;
}

double fit_loglog_order(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_loglog_order: need >= 2 matching samples");
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0))
            throw std::invalid_argument("fit_loglog_order: inputs must be positive");
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace starwave
