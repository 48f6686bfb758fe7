#pragma once

#include <vector>

#include <Eigen/Dense>

#include "starwave/lattice.hpp"

namespace starwave {

// Default step, 10% of the Verlet stability limit 2/omega_max.
double default_dt(const LatticeParams& p);

// One velocity-Verlet step (half-kick, drift, half-kick). Exactly
// time-reversible: a step of -dt undoes a step of +dt in exact arithmetic.
// Throws if |dt| is outside (0, 2/omega_max).
void step_verlet(StarState& s, const LatticeParams& p, double dt);

// n velocity-Verlet steps, recomputing the force once per step.
void evolve_verlet(StarState& s, const LatticeParams& p, double dt, long n_steps);

// Exact evolution oracle: dense eigendecomposition of the mass-weighted
// quadratic form. Intended for small systems; construction refuses more
// than 5000 degrees of freedom.
class ExactEvolver {
  public:
    explicit ExactEvolver(const LatticeParams& p);

    StarState evolve(const StarState& s, double t) const;

    const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
    const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }

  private:
    LatticeParams params_;
    Eigen::VectorXd eigenvalues_;
    Eigen::MatrixXd eigenvectors_;
    Eigen::VectorXd sqrt_mass_;
};

// Convenience wrapper that builds the eigendecomposition per call.
StarState evolve_exact(const StarState& s, const LatticeParams& p, double t);

// Exact propagator for large lattices: Chebyshev expansion of the wave
// kernels cos(t sqrt(A)) and sin(t sqrt(A))/sqrt(A) over the spectral
// interval of A = D^{-1} K. Cost is one stiffness apply per polynomial term
// (roughly t * omega_max / 2 terms); accuracy is near machine precision.
class ChebyshevPropagator {
  public:
    explicit ChebyshevPropagator(const LatticeParams& p);

    void advance(StarState& s, double t) const;

    double spectral_bound() const { return bound_; }

  private:
    LatticeParams params_;
    double bound_ = 0.0;
};

enum class Direction { toward_junction, away_from_junction };

// Gaussian-enveloped monochromatic wave packet on one ray.
struct PacketSpec {
    int ray = 0;           // 0-based ray index
    double k0 = 0.0;       // carrier wave number, 0 < k0 < pi/delta
    double center = 0.0;   // site units
    double width = 0.0;    // sigma, site units, >= 5
    Direction direction = Direction::toward_junction;
};

// Displacements exp(-(n-n0)^2/(2 sigma^2)) cos(k0 delta (n-n0)); velocities
// from the time derivative of the traveling carrier at the exact lattice
// dispersion. Center and all other rays start at rest.
StarState init_packet(const PacketSpec& spec, const LatticeParams& p);

// Latest time at which measurements stay clean of the Dirichlet boundary:
// (L - n0 - 4 sigma) * delta / v_g(k0).
double packet_time_horizon(const PacketSpec& spec, const LatticeParams& p);

}  // namespace starwave
