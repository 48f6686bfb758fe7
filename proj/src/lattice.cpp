#include "starwave/lattice.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace starwave {

LatticeParams make_lattice(int n_rays, int ray_len, double delta, double mass,
                           double center_mass) {
    if (n_rays < 2)
        throw std::invalid_argument("n_rays: need an integer >= 2, got " +
                                    std::to_string(n_rays));
    if (ray_len < 2)
        throw std::invalid_argument("ray_len: need an integer >= 2, got " +
                                    std::to_string(ray_len));
    if (!(delta > 0.0) || !std::isfinite(delta))
        throw std::invalid_argument("delta: need a finite real > 0, got " +
                                    std::to_string(delta));
    if (!(mass >= 0.0) || !std::isfinite(mass))
        throw std::invalid_argument("mass: need a finite real >= 0, got " +
                                    std::to_string(mass));
    if (!(center_mass > 0.0) || !std::isfinite(center_mass))
        throw std::invalid_argument("center_mass: need a finite real > 0, got " +
                                    std::to_string(center_mass));
    return LatticeParams{n_rays, ray_len, delta, mass, center_mass};
}

double dispersion(double k, const LatticeParams& p) {
    const double s = std::sin(0.5 * k * p.delta);
    return std::sqrt(4.0 / (p.delta * p.delta) * s * s + p.mass * p.mass);
}

double group_velocity(double k, const LatticeParams& p) {
    return std::sin(k * p.delta) / (p.delta * dispersion(k, p));
}

double omega_max(const LatticeParams& p) {
    return std::sqrt(4.0 / (p.delta * p.delta) + p.mass * p.mass);
}

StarState StarState::zero(const LatticeParams& p) {
    StarState s;
    s.n_rays = p.n_rays;
    s.ray_len = p.ray_len;
    s.pos.assign(p.dof(), 0.0);
    s.vel.assign(p.dof(), 0.0);
    return s;
}

void apply_scaled_stiffness(const LatticeParams& p, std::span<const double> x,
                            std::span<double> out) {
    const int N = p.n_rays, L = p.ray_len;
    const double inv_d2 = 1.0 / (p.delta * p.delta);
    const double m2 = p.mass * p.mass;
    const double diag = 2.0 * inv_d2 + m2;
    const double u = x[0];

    double first_sum = 0.0;
    for (int r = 0; r < N; ++r) first_sum += x[1 + r * L];
    out[0] = ((N * inv_d2 + m2) * u - inv_d2 * first_sum) / p.center_mass;

    for (int r = 0; r < N; ++r) {
        const double* xr = x.data() + 1 + r * L;
        double* or_ = out.data() + 1 + r * L;
        or_[0] = diag * xr[0] - inv_d2 * (u + xr[1]);
        for (int n = 1; n < L - 1; ++n)
            or_[n] = diag * xr[n] - inv_d2 * (xr[n - 1] + xr[n + 1]);
        or_[L - 1] = diag * xr[L - 1] - inv_d2 * xr[L - 2];
    }
}

Accel acceleration(const StarState& s, const LatticeParams& p) {
    if (!s.shape_matches(p))
        throw std::invalid_argument("acceleration: state shape does not match params");
    Accel a;
    a.n_rays = p.n_rays;
    a.ray_len = p.ray_len;
    a.a.resize(p.dof());
    apply_scaled_stiffness(p, s.pos, a.a);
    for (double& v : a.a) v = -v;
    return a;
}

double energy(const StarState& s, const LatticeParams& p) {
    if (!s.shape_matches(p))
        throw std::invalid_argument("energy: state shape does not match params");
    const int N = p.n_rays, L = p.ray_len;
    const double inv_d2 = 1.0 / (p.delta * p.delta);
    const double m2 = p.mass * p.mass;

    double e = 0.5 * (p.center_mass * s.u_dot() * s.u_dot() + m2 * s.u() * s.u());
    for (int r = 0; r < N; ++r) {
        const double* phi = s.pos.data() + 1 + r * L;
        const double* phid = s.vel.data() + 1 + r * L;
        double ray = 0.0;
        for (int n = 0; n < L; ++n) {
            const double next = (n + 1 < L) ? phi[n + 1] : 0.0;  // Dirichlet ghost
            const double dphi = next - phi[n];
            ray += phid[n] * phid[n] + inv_d2 * dphi * dphi + m2 * phi[n] * phi[n];
        }
        const double junc = s.u() - phi[0];
        e += 0.5 * ray + 0.5 * inv_d2 * junc * junc;
    }
    return e;
}

Eigen::VectorXd mass_diagonal(const LatticeParams& p) {
    Eigen::VectorXd d = Eigen::VectorXd::Ones(p.dof());
    d[0] = p.center_mass;
    return d;
}

Eigen::MatrixXd build_stiffness(const LatticeParams& p) {
    const int N = p.n_rays, L = p.ray_len;
    const double inv_d2 = 1.0 / (p.delta * p.delta);
    const double m2 = p.mass * p.mass;
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(p.dof(), p.dof());

    k(0, 0) = N * inv_d2 + m2;
    for (int r = 0; r < N; ++r) {
        const int base = 1 + r * L;
        k(0, base) = -inv_d2;
        k(base, 0) = -inv_d2;
        for (int n = 0; n < L; ++n) {
            k(base + n, base + n) = 2.0 * inv_d2 + m2;
            if (n + 1 < L) {
                k(base + n, base + n + 1) = -inv_d2;
                k(base + n + 1, base + n) = -inv_d2;
            }
        }
    }
    return k;
}

Eigen::MatrixXd build_quadratic_form(const LatticeParams& p) {
    Eigen::MatrixXd h = build_stiffness(p);
    const double s = 1.0 / std::sqrt(p.center_mass);
    h.row(0) *= s;
    h.col(0) *= s;
    return h;
}

}  // namespace starwave
