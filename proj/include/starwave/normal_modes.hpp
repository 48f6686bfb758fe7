#pragma once

#include <complex>
#include <span>
#include <vector>

#include "starwave/dynamics.hpp"
#include "starwave/lattice.hpp"

namespace starwave {

// Per-ray cosine/sine sums of the displacements at wave number k,
//   phi_c[j] = sum_n phi_n^{(j)} cos(kn),  phi_s[j] = sum_n phi_n^{(j)} sin(kn),
// together with the complex combination sum_n e^{ikn} phi_n^{(j)}.
// This module fixes delta = 1 (k in (0, pi)); rescale before entry.
struct RaySpectra {
    double k = 0.0;
    std::vector<double> phi_c;
    std::vector<double> phi_s;
    std::vector<std::complex<double>> phi;
};

RaySpectra ray_spectra(const StarState& s, double k);

// (N - 2M)(1 - cos k) + (1 - M) m^2: coupling coefficient C(k) that both
// weights phi_s in the mode combination and drives the residual xi_0.
double mode_coupling_coeff(double k, const LatticeParams& p);

// Decoupled-mode amplitudes at wave number k, built from displacements and,
// through the identical linear map, from velocities.
// For M != 1:  xi_j = sin(k) xi_0 + C(k) phi_s[j].
// For M == 1 the form divided by 2 sin(k/2) is used:
//              xi_j = cos(k/2) xi_0 + (N-2) sin(k/2) phi_s[j].
struct ModeSpectrum {
    double k = 0.0;
    double coeff_c = 0.0;
    double xi0 = 0.0;
    double xi0_dot = 0.0;
    std::vector<double> xi;
    std::vector<double> xi_dot;
};

ModeSpectrum xi_transform(const StarState& s, double k, const LatticeParams& p);

// The undivided combination sin(k) xi_0 + C(k) phi_s regardless of M.
ModeSpectrum xi_transform_general(const StarState& s, double k,
                                  const LatticeParams& p);

struct DecouplingReport {
    double max_xi_dev = 0.0;       // worst |xi_j(t) - harmonic prediction|
    double max_xi0_residual = 0.0; // worst |xi0_dd + w^2 xi0 + C(k) u|
};

// Evolves the state with the exact oracle and checks that every xi_j(k)
// follows xi(t) = xi(0) cos(wt) + xi_dot(0) sin(wt)/w, and that xi_0 obeys
// its driven equation. The state must be compactly supported and all times
// inside the boundary-influence horizon.
DecouplingReport verify_decoupling(const StarState& s, const LatticeParams& p,
                                   std::span<const double> ks,
                                   std::span<const double> times);
DecouplingReport verify_decoupling(const StarState& s, const LatticeParams& p,
                                   std::span<const double> ks,
                                   std::span<const double> times,
                                   const ExactEvolver& evolver);
DecouplingReport verify_decoupling(const StarState& s, const LatticeParams& p,
                                   double k, std::span<const double> times);

}  // namespace starwave
