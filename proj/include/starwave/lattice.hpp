#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace starwave {

// Static description of the star lattice: n_rays chains of ray_len sites with
// spacing delta, field mass `mass`, joined at a central oscillator of mass
// center_mass. center_mass is a dimensionless ratio; delta carries length,
// mass carries inverse length.
struct LatticeParams {
    int n_rays = 0;
    int ray_len = 0;
    double delta = 0.0;
    double mass = 0.0;
    double center_mass = 0.0;

    // Total number of degrees of freedom (center + all ray sites).
    int dof() const { return n_rays * ray_len + 1; }
};

// Validates ranges (N >= 2, L >= 2, delta > 0, mass >= 0, center_mass > 0) and
// throws std::invalid_argument naming the offending field.
LatticeParams make_lattice(int n_rays, int ray_len, double delta, double mass,
                           double center_mass);

// Positive branch of the lattice dispersion relation,
// omega^2 = (4/delta^2) sin^2(k delta / 2) + mass^2.
double dispersion(double k, const LatticeParams& p);

// Group velocity d(omega)/dk = sin(k delta) / (delta * omega).
double group_velocity(double k, const LatticeParams& p);

// Band top of the uniform chain, sqrt(4/delta^2 + mass^2). Reference scale
// for integrator stability.
double omega_max(const LatticeParams& p);

// Dynamical configuration of the star. Displacements and velocities are held
// in flat vectors of size dof() with the center at index 0 followed by the
// rays in order; rays are 0-based, sites 1-based (site 0 is the center).
struct StarState {
    int n_rays = 0;
    int ray_len = 0;
    std::vector<double> pos;
    std::vector<double> vel;

    static StarState zero(const LatticeParams& p);

    double& u() { return pos[0]; }
    double u() const { return pos[0]; }
    double& u_dot() { return vel[0]; }
    double u_dot() const { return vel[0]; }

    int idx(int ray, int site) const { return 1 + ray * ray_len + (site - 1); }
    double& phi(int ray, int site) { return pos[idx(ray, site)]; }
    double phi(int ray, int site) const { return pos[idx(ray, site)]; }
    double& phi_dot(int ray, int site) { return vel[idx(ray, site)]; }
    double phi_dot(int ray, int site) const { return vel[idx(ray, site)]; }

    bool shape_matches(const LatticeParams& p) const {
        return n_rays == p.n_rays && ray_len == p.ray_len &&
               static_cast<int>(pos.size()) == p.dof() &&
               static_cast<int>(vel.size()) == p.dof();
    }
};

// Accelerations in the same flat layout as StarState.
struct Accel {
    int n_rays = 0;
    int ray_len = 0;
    std::vector<double> a;

    double a_u() const { return a[0]; }
    double a_phi(int ray, int site) const {
        return a[1 + ray * ray_len + (site - 1)];
    }
};

// out = D^{-1} K x where K is the stiffness form of the potential energy and
// D = diag(center_mass, 1, 1, ...). Acceleration of the displacement vector x
// is -out. Outer boundary is closed with a Dirichlet ghost site.
void apply_scaled_stiffness(const LatticeParams& p, std::span<const double> x,
                            std::span<double> out);

Accel acceleration(const StarState& s, const LatticeParams& p);

// Conserved energy (Hamiltonian): ray kinetic/spring/mass terms, the
// junction couplings (u - phi_1)^2 / (2 delta^2), and the center terms
// (center_mass u_dot^2 + mass^2 u^2) / 2.
double energy(const StarState& s, const LatticeParams& p);

// Diagonal of the mass matrix D.
Eigen::VectorXd mass_diagonal(const LatticeParams& p);

// Stiffness matrix K (dense, symmetric): potential energy = x^T K x / 2.
// Built entry-by-entry from the quadratic form, independently of the
// acceleration stencil.
Eigen::MatrixXd build_stiffness(const LatticeParams& p);

// Mass-weighted quadratic form H = D^{-1/2} K D^{-1/2}. Symmetric; its
// eigenvalues are the squared normal frequencies of the finite system, and
// acceleration(x) = -D^{-1/2} H D^{1/2} x.
Eigen::MatrixXd build_quadratic_form(const LatticeParams& p);

}  // namespace starwave
