#include "starwave/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "starwave/numerics.hpp"

namespace starwave {

namespace {

void check_shape(const StarState& s, const LatticeParams& p, const char* who) {
    if (!s.shape_matches(p))
        throw std::invalid_argument(std::string(who) + ": state shape does not match params");
}

}  // namespace

double default_dt(const LatticeParams& p) { return 0.1 * (2.0 / omega_max(p)); }

void step_verlet(StarState& s, const LatticeParams& p, double dt) {
    check_shape(s, p, "step_verlet");
    const double limit = 2.0 / omega_max(p);
    if (!(std::abs(dt) > 0.0) || !(std::abs(dt) < limit))
        throw std::invalid_argument("step_verlet: |dt| must lie in (0, 2/omega_max) = (0, " +
                                    std::to_string(limit) + ")");
    const int n = p.dof();
    std::vector<double> acc(n);
    apply_scaled_stiffness(p, s.pos, acc);
    for (int i = 0; i < n; ++i) s.vel[i] -= 0.5 * dt * acc[i];
    for (int i = 0; i < n; ++i) s.pos[i] += dt * s.vel[i];
    apply_scaled_stiffness(p, s.pos, acc);
    for (int i = 0; i < n; ++i) s.vel[i] -= 0.5 * dt * acc[i];
}

void evolve_verlet(StarState& s, const LatticeParams& p, double dt, long n_steps) {
    check_shape(s, p, "evolve_verlet");
    const double limit = 2.0 / omega_max(p);
    if (!(std::abs(dt) > 0.0) || !(std::abs(dt) < limit))
        throw std::invalid_argument("evolve_verlet: |dt| out of stability range");
    if (n_steps < 0) throw std::invalid_argument("evolve_verlet: n_steps < 0");
    if (n_steps == 0) return;

    const int n = p.dof();
    std::vector<double> acc(n);
    apply_scaled_stiffness(p, s.pos, acc);
    for (long step = 0; step < n_steps; ++step) {
        for (int i = 0; i < n; ++i) s.vel[i] -= 0.5 * dt * acc[i];
        for (int i = 0; i < n; ++i) s.pos[i] += dt * s.vel[i];
        apply_scaled_stiffness(p, s.pos, acc);
        for (int i = 0; i < n; ++i) s.vel[i] -= 0.5 * dt * acc[i];
    }
}

ExactEvolver::ExactEvolver(const LatticeParams& p) : params_(p) {
    if (p.dof() > 5000)
        throw std::invalid_argument(
            "ExactEvolver: " + std::to_string(p.dof()) +
            " degrees of freedom is too large for a dense eigendecomposition; "
            "use the Verlet or Chebyshev path");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(build_quadratic_form(p));
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("ExactEvolver: eigendecomposition failed");
    eigenvalues_ = solver.eigenvalues();
    eigenvectors_ = solver.eigenvectors();
    sqrt_mass_ = mass_diagonal(p).cwiseSqrt();
}

StarState ExactEvolver::evolve(const StarState& s, double t) const {
    check_shape(s, params_, "ExactEvolver::evolve");
    const int n = params_.dof();
    Eigen::Map<const Eigen::VectorXd> x0(s.pos.data(), n);
    Eigen::Map<const Eigen::VectorXd> v0(s.vel.data(), n);

    const Eigen::VectorXd wx = eigenvectors_.transpose() * (sqrt_mass_.cwiseProduct(x0));
    const Eigen::VectorXd wv = eigenvectors_.transpose() * (sqrt_mass_.cwiseProduct(v0));

    Eigen::VectorXd yx(n), yv(n);
    for (int i = 0; i < n; ++i) {
        const double omega = std::sqrt(std::max(eigenvalues_[i], 0.0));
        const double c = std::cos(omega * t);
        const double sc = (omega * t == 0.0) ? t : std::sin(omega * t) / omega;
        yx[i] = c * wx[i] + sc * wv[i];
        yv[i] = -omega * std::sin(omega * t) * wx[i] + c * wv[i];
    }

    StarState out = s;
    Eigen::Map<Eigen::VectorXd> xo(out.pos.data(), n);
    Eigen::Map<Eigen::VectorXd> vo(out.vel.data(), n);
    xo = (eigenvectors_ * yx).cwiseQuotient(sqrt_mass_);
    vo = (eigenvectors_ * yv).cwiseQuotient(sqrt_mass_);
    return out;
}

StarState evolve_exact(const StarState& s, const LatticeParams& p, double t) {
    return ExactEvolver(p).evolve(s, t);
}

ChebyshevPropagator::ChebyshevPropagator(const LatticeParams& p) : params_(p) {
    // Gershgorin bound on the spectrum of D^{-1/2} K D^{-1/2}.
    const double inv_d2 = 1.0 / (p.delta * p.delta);
    const double m2 = p.mass * p.mass;
    const double inv_sqrt_m = 1.0 / std::sqrt(p.center_mass);
    const double row_center = (p.n_rays * inv_d2 + m2) / p.center_mass +
                              p.n_rays * inv_d2 * inv_sqrt_m;
    const double row_first = 2.0 * inv_d2 + m2 + inv_d2 * (1.0 + inv_sqrt_m);
    const double row_bulk = 4.0 * inv_d2 + m2;
    bound_ = 1.002 * std::max({row_center, row_first, row_bulk});
}

void ChebyshevPropagator::advance(StarState& s, double t) const {
    check_shape(s, params_, "ChebyshevPropagator::advance");
    if (t == 0.0) return;

    const double tau = std::abs(t) * std::sqrt(bound_);
    const double sqrt_b = std::sqrt(bound_);
    const int q_max = static_cast<int>(tau + 14.0 * std::cbrt(tau + 1.0)) + 60;
    const std::vector<double> bj = bessel_j_sequence(tau, q_max);

    // cos kernel: a_0 = J_0, a_j = 2 (-1)^j J_{2j}.
    // sin(t w)/w kernel: d_0 = 2 S_0 / sqrt(b), d_r = 4 (-1)^r S_r / sqrt(b)
    // with S_r the suffix sums of odd-order values.
    const int terms = q_max / 2;
    std::vector<double> a(terms + 1), d(terms + 1);
    std::vector<double> suffix(terms + 2, 0.0);
    for (int r = terms; r >= 0; --r)
        suffix[r] = suffix[r + 1] + (2 * r + 1 <= q_max ? bj[2 * r + 1] : 0.0);
    // Consistency of the Miller normalization: sum (2q+1) J_{2q+1} = tau/2.
    double weighted = 0.0;
    for (int r = 0; r <= terms; ++r) weighted += (2 * r + 1) * bj[2 * r + 1];
    if (std::abs(weighted - 0.5 * tau) > 1e-10 * (1.0 + 0.5 * tau))
        throw std::runtime_error("ChebyshevPropagator: Bessel sequence inaccurate");

    const double sign_t = (t >= 0.0) ? 1.0 : -1.0;
    for (int r = 0; r <= terms; ++r) {
        const double parity = (r % 2 == 0) ? 1.0 : -1.0;
        a[r] = (r == 0 ? 1.0 : 2.0 * parity) * bj[2 * r];
        d[r] = (r == 0 ? 2.0 : 4.0 * parity) * suffix[r] / sqrt_b * sign_t;
    }
    int n_terms = terms;
    while (n_terms > 1 &&
           std::abs(a[n_terms]) + std::abs(d[n_terms]) * sqrt_b < 1e-17)
        --n_terms;

    const int n = params_.dof();
    // One Chebyshev sweep per initial vector; each sweep accumulates both
    // kernel images. A~ = (2/b) A - I.
    auto sweep = [&](const std::vector<double>& x, std::vector<double>& cos_img,
                     std::vector<double>& sinc_img) {
        std::vector<double> t_prev = x;
        std::vector<double> t_cur(n), t_next(n), ax(n);
        apply_scaled_stiffness(params_, t_prev, ax);
        for (int i = 0; i < n; ++i) t_cur[i] = (2.0 / bound_) * ax[i] - t_prev[i];
        cos_img.assign(n, 0.0);
        sinc_img.assign(n, 0.0);
        for (int i = 0; i < n; ++i) {
            cos_img[i] = a[0] * t_prev[i] + a[1] * t_cur[i];
            sinc_img[i] = d[0] * t_prev[i] + d[1] * t_cur[i];
        }
        for (int j = 2; j <= n_terms; ++j) {
            apply_scaled_stiffness(params_, t_cur, ax);
            for (int i = 0; i < n; ++i)
                t_next[i] = 2.0 * ((2.0 / bound_) * ax[i] - t_cur[i]) - t_prev[i];
            const double aj = a[j], dj = d[j];
            for (int i = 0; i < n; ++i) {
                cos_img[i] += aj * t_next[i];
                sinc_img[i] += dj * t_next[i];
            }
            t_prev.swap(t_cur);
            t_cur.swap(t_next);
        }
    };

    std::vector<double> cos_x, sinc_x, cos_v, sinc_v;
    sweep(s.pos, cos_x, sinc_x);
    sweep(s.vel, cos_v, sinc_v);

    // x(t) = cos(tW) x0 + W^{-1} sin(tW) v0
    // v(t) = -A W^{-1} sin(tW) x0 + cos(tW) v0
    std::vector<double> a_sinc_x(n);
    apply_scaled_stiffness(params_, sinc_x, a_sinc_x);
    for (int i = 0; i < n; ++i) {
        s.pos[i] = cos_x[i] + sinc_v[i];
        s.vel[i] = cos_v[i] - a_sinc_x[i];
    }
}

StarState init_packet(const PacketSpec& spec, const LatticeParams& p) {
    if (spec.ray < 0 || spec.ray >= p.n_rays)
        throw std::invalid_argument("packet ray: index out of range");
    if (!(spec.width >= 5.0))
        throw std::invalid_argument("packet width: sigma must be >= 5 sites");
    if (!(spec.k0 > 0.0) || !(spec.k0 < std::numbers::pi / p.delta))
        throw std::invalid_argument("packet k0: need 0 < k0 < pi/delta");
    const double lo = spec.center - 4.0 * spec.width;
    const double hi = spec.center + 4.0 * spec.width;
    if (lo < 4.0)
        throw std::invalid_argument("packet overlaps junction: center - 4 sigma < 4");
    if (hi > p.ray_len - 4.0)
        throw std::invalid_argument("packet overlaps boundary: center + 4 sigma > L - 4");

    const double omega = dispersion(spec.k0, p);
    const double vel_sign = (spec.direction == Direction::toward_junction) ? -1.0 : 1.0;

    StarState s = StarState::zero(p);
    for (int n = 1; n <= p.ray_len; ++n) {
        const double dn = n - spec.center;
        const double g = std::exp(-dn * dn / (2.0 * spec.width * spec.width));
        const double theta = spec.k0 * p.delta * dn;
        s.phi(spec.ray, n) = g * std::cos(theta);
        s.phi_dot(spec.ray, n) = vel_sign * omega * g * std::sin(theta);
    }
    return s;
}

double packet_time_horizon(const PacketSpec& spec, const LatticeParams& p) {
    const double vg = group_velocity(spec.k0, p);
    return (p.ray_len - spec.center - 4.0 * spec.width) * p.delta / vg;
}

}  // namespace starwave
