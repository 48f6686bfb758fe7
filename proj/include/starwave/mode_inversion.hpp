#pragma once

#include <span>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "starwave/lattice.hpp"

namespace starwave {

// Recovering the ray sums Q_n from the mode data inverts an upper-bidiagonal
// system whose inverse has entries (1-N)^{m-n}; any noise in the sampled
// sums is amplified by up to (N-1)^L. The symmetric-sum side of the pipeline
// is therefore carried in extended precision end to end, and rounded to
// double only at the outputs.
using hp_real = boost::multiprecision::cpp_bin_float_50;

// Mode amplitudes xi_j(k) (and the velocity images) sampled on the uniform
// midpoint grid k_p = (p + 1/2) pi / P, extended to (-pi, pi) by parity.
// Valid for center_mass = 1 and delta = 1; quadrature against the sampled
// data is exact for trigonometric polynomials once P >= L + 2.
struct ModeGrid {
    int n_rays = 0;
    int ray_len = 0;
    int size = 0;  // P

    std::vector<double> nodes;       // k_p
    std::vector<double> xi;          // [p * N + j]
    std::vector<double> xi_dot;
    std::vector<double> xi0;
    std::vector<double> xi0_dot;

    // sum_j xi_j and its velocity image, extended precision
    std::vector<hp_real> sum_xi;
    std::vector<hp_real> sum_xi_dot;
    // cos(k_p (n + 1/2)) for n = 0..L, extended precision, [p * (L+1) + n]
    std::vector<hp_real> eta_basis;

    static ModeGrid sample(const StarState& s, const LatticeParams& p, int size);
};

// Ray sums, recurrence coefficients and cyclic inter-ray differences taken
// directly from a configuration: Q_0 = N u, Q_n = sum_j phi_n^{(j)},
// eta_n = Q_n + (N-1) Q_{n+1}, dq[j][n] = phi_n^{(j+1)} - phi_n^{(j)}.
struct ChainSums {
    int n_rays = 0;
    int ray_len = 0;
    std::vector<double> q;    // n = 0..L
    std::vector<double> eta;  // n = 0..L
    std::vector<double> dq;   // [j * L + (n-1)], j cyclic
};

ChainSums chain_sums_from_state(const StarState& s, bool velocities = false);

// Cyclic differences phi^{(j+1)} - phi^{(j)} recovered by quadrature of
// (xi_{j+1} - xi_j) / sin(k/2) against sin(kn), with the 1/(N-2) factor that
// the mode combination carries. Unsupported for N = 2 (differences vanish
// identically). Layout [j * L + (n-1)].
std::vector<double> delta_q(const ModeGrid& grid, bool velocities = false);

// eta_n by quadrature of sum_j xi_j against cos(k (n + 1/2)), n = 0..L.
std::vector<double> eta_coeffs(const ModeGrid& grid, bool velocities = false);
std::vector<hp_real> eta_coeffs_hp(const ModeGrid& grid, bool velocities = false);

// Back-substitution of eta_n = Q_n + (N-1) Q_{n+1} on the truncated support:
// Q_L = eta_L, Q_n = eta_n - (N-1) Q_{n+1}.
std::vector<double> q_from_eta_triangular(std::span<const double> eta, int n_rays);
std::vector<hp_real> q_from_eta_triangular(std::span<const hp_real> eta, int n_rays);

// Q_n by quadrature against the closed-form kernel
//   [cos(k(n+1/2)) + (N-1) cos(k(n-1/2))] / [N^2 - 4(N-1) sin^2(k/2)],
// compared against the triangular solve. The triangular path is
// authoritative; the deviation is reported, not asserted.
struct KernelReport {
    int grid_size = 0;
    std::vector<double> q_kernel;
    std::vector<double> q_triangular;
    double max_abs_dev = 0.0;
};

KernelReport q_from_eta_kernel(const ModeGrid& grid, bool velocities = false);

// Ray values from sums and cyclic differences:
//   phi_n^{(j)} = (Q_n - sum_{m=0}^{N-1} (N-1-m) dq[(j+m) mod N][n]) / N,
// with u = Q_0 / N. Rejects differences whose cyclic sum is nonzero.
struct ReconstructedField {
    double center = 0.0;
    std::vector<double> rays;  // [j * L + (n-1)]
};

ReconstructedField reconstruct_state(std::span<const double> q,
                                     std::span<const double> dq, int n_rays,
                                     int ray_len);

// Full pipeline: sample -> (delta_q, eta, triangular Q) -> reconstruct, for
// both displacements and velocities; returns the largest absolute deviation
// from the input state.
double roundtrip(const StarState& s, const LatticeParams& p, int grid_size);

}  // namespace starwave
