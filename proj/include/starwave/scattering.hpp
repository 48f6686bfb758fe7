#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "starwave/dynamics.hpp"
#include "starwave/lattice.hpp"

namespace starwave {

// Reflection amplitude at wave number k together with the unimodular phase
// factor it derives from: r = phase/N - (N-1)/N.
struct Reflection {
    double k = 0.0;
    std::complex<double> r;
    std::complex<double> phase;
};

// Exact reflection coefficient of the junction for arbitrary N, M, m, delta,
// from the monochromatic ansatz (incident + reflected wave on one ray, equal
// transmitted waves on the others, center oscillating with the transmitted
// amplitude). Requires 0 < k delta < pi; band edges have zero group velocity
// and are rejected.
Reflection reflection_exact(double k, const LatticeParams& p);

// Three-ray closed form driven by the phase
//   e^{i theta} = -[(2M-3) sin(k d/2) - 3i cos(k d/2)]
//                / [(2M-3) sin(k d/2) + 3i cos(k d/2)],
// which drops the (M-1) m^2 d^2 junction term and so ignores the field mass.
// Coincides with reflection_exact when m = 0; the gap at m > 0, M != 1
// vanishes with the spacing.
Reflection reflection_three_ray(double k, double center_mass, double delta);

// Same three-ray phase with a complex center mass; analytic evaluation only.
std::complex<double> theta_three_ray(double k, std::complex<double> center_mass,
                                    double delta);

// Residual of the center equation of motion under the scattering ansatz with
// reflection amplitude r; zero (to roundoff) iff r solves the junction.
std::complex<double> junction_residual(double k, std::complex<double> r,
                                       const LatticeParams& p);

// Point-scatterer limit: phase parameter of the continuum junction.
struct ContinuumParams {
    std::complex<double> k1;
};

// e^{i theta(k)} = -(k - k1)/(k + k1). Throws on the pole k = -k1.
std::complex<double> theta_continuum(double k, const ContinuumParams& c);

// Reflection assembled from the continuum phase with N = 3.
std::complex<double> reflection_continuum(double k, const ContinuumParams& c);

// For each lattice spacing, sets M(delta) = 3i/(k1 delta) and returns
// |three-ray lattice phase - continuum phase|. Spacings must be positive and
// strictly decreasing.
std::vector<double> continuum_limit_check(double k, const ContinuumParams& c,
                                          std::vector<double> deltas);

// Time-domain scattering measurement.
struct ReflectionMeasurement {
    double k0 = 0.0;
    double r_abs = 0.0;          // |R| from the incident-ray outgoing window
    double r_arg = 0.0;          // arg R, junction-referenced
    double t_abs = 0.0;          // |T| from the first transmitted ray
    double transmit_spread = 0.0;  // max |T_j - T_j'| across transmitted rays
    double energy_drift = 0.0;   // |E(t_f) - E(0)| / E(0)
    double incident_amp = 0.0;   // carrier amplitude of the incident packet
    double t_final = 0.0;
};

// Per-sample diagnostics of the scattering run.
struct ScatterSeries {
    std::vector<double> t;
    std::vector<double> energy;
    std::vector<std::vector<double>> centroid;  // [sample][ray]
};

// Launches the packet toward the junction, evolves it past the interaction
// with the Chebyshev propagator, and extracts carrier amplitudes of the
// outgoing waves from the complex signal phi + i phi_dot / omega(k0).
// If `series` is given, energy and per-ray centroids are recorded on a
// uniform time grid.
ReflectionMeasurement measure_reflection(const PacketSpec& spec,
                                         const LatticeParams& p,
                                         ScatterSeries* series = nullptr);

}  // namespace starwave
