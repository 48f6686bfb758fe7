#include "starwave/mode_inversion.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/constants/constants.hpp>

#include "starwave/normal_modes.hpp"

namespace starwave {

namespace {

void check_grid_shape(const ModeGrid& grid) {
    if (grid.size <= 0 || grid.n_rays < 2 || grid.ray_len < 1)
        throw std::invalid_argument("ModeGrid: empty or malformed grid");
}

}  // namespace

ModeGrid ModeGrid::sample(const StarState& s, const LatticeParams& p, int size) {
    if (p.center_mass != 1.0)
        throw std::invalid_argument("ModeGrid::sample: inverse transform requires center_mass = 1");
    if (p.delta != 1.0)
        throw std::invalid_argument("ModeGrid::sample: mode transforms fix delta = 1");
    if (!s.shape_matches(p))
        throw std::invalid_argument("ModeGrid::sample: state shape mismatch");
    if (size < p.ray_len + 2)
        throw std::invalid_argument("ModeGrid::sample: grid too coarse, need P >= L + 2");

    const int N = p.n_rays, L = p.ray_len, P = size;
    ModeGrid g;
    g.n_rays = N;
    g.ray_len = L;
    g.size = P;
    g.nodes.resize(P);
    g.xi.resize(static_cast<size_t>(P) * N);
    g.xi_dot.resize(static_cast<size_t>(P) * N);
    g.xi0.resize(P);
    g.xi0_dot.resize(P);
    g.sum_xi.resize(P);
    g.sum_xi_dot.resize(P);
    g.eta_basis.resize(static_cast<size_t>(P) * (L + 1));

    // Ray sums of displacements and velocities, exact in extended precision.
    std::vector<hp_real> q_pos(L + 1), q_vel(L + 1);
    q_pos[0] = 0;
    q_vel[0] = 0;
    for (int n = 1; n <= L; ++n) {
        hp_real qp = 0, qv = 0;
        for (int r = 0; r < N; ++r) {
            qp += s.phi(r, n);
            qv += s.phi_dot(r, n);
        }
        q_pos[n] = qp;
        q_vel[n] = qv;
    }

    const hp_real pi_hp = boost::math::constants::pi<hp_real>();
    for (int pnode = 0; pnode < P; ++pnode) {
        const hp_real k = pi_hp * (2 * pnode + 1) / (2 * P);
        const hp_real ch = cos(k / 2), sh = sin(k / 2);
        const hp_real ck = cos(k), sk = sin(k);

        hp_real c = 1, si = 0;  // cos(k n), sin(k n) from n = 0
        hp_real sum_c_pos = 0, sum_s_pos = 0, sum_c_vel = 0, sum_s_vel = 0;
        g.eta_basis[static_cast<size_t>(pnode) * (L + 1)] = ch;
        for (int n = 1; n <= L; ++n) {
            const hp_real cn = c * ck - si * sk;
            const hp_real sn = si * ck + c * sk;
            c = cn;
            si = sn;
            sum_c_pos += q_pos[n] * c;
            sum_s_pos += q_pos[n] * si;
            sum_c_vel += q_vel[n] * c;
            sum_s_vel += q_vel[n] * si;
            g.eta_basis[static_cast<size_t>(pnode) * (L + 1) + n] = c * ch - si * sh;
        }
        // sum_j xi_j = N cos(k/2) (u + sum Q_n cos kn) + (N-2) sin(k/2) sum Q_n sin kn
        g.sum_xi[pnode] = N * ch * (hp_real(s.u()) + sum_c_pos) + (N - 2) * sh * sum_s_pos;
        g.sum_xi_dot[pnode] =
            N * ch * (hp_real(s.u_dot()) + sum_c_vel) + (N - 2) * sh * sum_s_vel;

        const double kd = static_cast<double>(k);
        g.nodes[pnode] = kd;
        const ModeSpectrum spec = xi_transform(s, kd, p);
        g.xi0[pnode] = spec.xi0;
        g.xi0_dot[pnode] = spec.xi0_dot;
        for (int r = 0; r < N; ++r) {
            g.xi[static_cast<size_t>(pnode) * N + r] = spec.xi[r];
            g.xi_dot[static_cast<size_t>(pnode) * N + r] = spec.xi_dot[r];
        }
    }
    return g;
}

ChainSums chain_sums_from_state(const StarState& s, bool velocities) {
    const int N = s.n_rays, L = s.ray_len;
    ChainSums cs;
    cs.n_rays = N;
    cs.ray_len = L;
    cs.q.assign(L + 1, 0.0);
    cs.eta.assign(L + 1, 0.0);
    cs.dq.assign(static_cast<size_t>(N) * L, 0.0);

    auto value = [&](int r, int n) {
        return velocities ? s.phi_dot(r, n) : s.phi(r, n);
    };
    cs.q[0] = N * (velocities ? s.u_dot() : s.u());
    for (int n = 1; n <= L; ++n) {
        double acc = 0.0;
        for (int r = 0; r < N; ++r) acc += value(r, n);
        cs.q[n] = acc;
    }
    for (int n = 0; n <= L; ++n) {
        const double next = (n + 1 <= L) ? cs.q[n + 1] : 0.0;
        cs.eta[n] = cs.q[n] + (N - 1) * next;
    }
    for (int r = 0; r < N; ++r)
        for (int n = 1; n <= L; ++n)
            cs.dq[static_cast<size_t>(r) * L + (n - 1)] =
                value((r + 1) % N, n) - value(r, n);
    return cs;
}

std::vector<double> delta_q(const ModeGrid& grid, bool velocities) {
    check_grid_shape(grid);
    const int N = grid.n_rays, L = grid.ray_len, P = grid.size;
    if (N == 2)
        throw std::invalid_argument(
            "delta_q: unsupported for N = 2 (mode differences vanish identically)");

    const std::vector<double>& xi = velocities ? grid.xi_dot : grid.xi;
    std::vector<double> dq(static_cast<size_t>(N) * L, 0.0);
    std::vector<double> ratio(P);
    for (int r = 0; r < N; ++r) {
        for (int pnode = 0; pnode < P; ++pnode) {
            const double diff = xi[static_cast<size_t>(pnode) * N + (r + 1) % N] -
                                xi[static_cast<size_t>(pnode) * N + r];
            ratio[pnode] = diff / std::sin(0.5 * grid.nodes[pnode]);
        }
        for (int n = 1; n <= L; ++n) {
            double acc = 0.0;
            for (int pnode = 0; pnode < P; ++pnode)
                acc += ratio[pnode] * std::sin(grid.nodes[pnode] * n);
            dq[static_cast<size_t>(r) * L + (n - 1)] = 2.0 * acc / ((N - 2.0) * P);
        }
    }
    return dq;
}

std::vector<hp_real> eta_coeffs_hp(const ModeGrid& grid, bool velocities) {
    check_grid_shape(grid);
    const int L = grid.ray_len, P = grid.size;
    const std::vector<hp_real>& s = velocities ? grid.sum_xi_dot : grid.sum_xi;
    std::vector<hp_real> eta(L + 1);
    for (int n = 0; n <= L; ++n) {
        hp_real acc = 0;
        for (int pnode = 0; pnode < P; ++pnode)
            acc += s[pnode] * grid.eta_basis[static_cast<size_t>(pnode) * (L + 1) + n];
        eta[n] = 2 * acc / P;
    }
    return eta;
}

std::vector<double> eta_coeffs(const ModeGrid& grid, bool velocities) {
    const std::vector<hp_real> eta = eta_coeffs_hp(grid, velocities);
    std::vector<double> out(eta.size());
    std::transform(eta.begin(), eta.end(), out.begin(),
                   [](const hp_real& v) { return static_cast<double>(v); });
    return out;
}

namespace {

template <typename Real>
std::vector<Real> back_substitute(std::span<const Real> eta, int n_rays) {
    if (eta.empty()) throw std::invalid_argument("q_from_eta_triangular: empty eta");
    const int top = static_cast<int>(eta.size()) - 1;
    std::vector<Real> q(eta.size());
    q[top] = eta[top];
    for (int n = top - 1; n >= 0; --n) q[n] = eta[n] - Real(n_rays - 1) * q[n + 1];
    return q;
}

}  // namespace

std::vector<double> q_from_eta_triangular(std::span<const double> eta, int n_rays) {
    return back_substitute(eta, n_rays);
}

std::vector<hp_real> q_from_eta_triangular(std::span<const hp_real> eta, int n_rays) {
    return back_substitute(eta, n_rays);
}

KernelReport q_from_eta_kernel(const ModeGrid& grid, bool velocities) {
    check_grid_shape(grid);
    const int N = grid.n_rays, L = grid.ray_len, P = grid.size;
    if (N == 2)
        throw std::invalid_argument(
            "q_from_eta_kernel: unsupported for N = 2 (kernel denominator vanishes at k = pi)");

    const std::vector<hp_real>& sum_hp = velocities ? grid.sum_xi_dot : grid.sum_xi;
    KernelReport rep;
    rep.grid_size = P;
    rep.q_kernel.assign(L + 1, 0.0);
    for (int n = 0; n <= L; ++n) {
        double acc = 0.0;
        for (int pnode = 0; pnode < P; ++pnode) {
            const double k = grid.nodes[pnode];
            const double sh = std::sin(0.5 * k);
            const double denom = N * N - 4.0 * (N - 1.0) * sh * sh;
            const double kern =
                (std::cos(k * (n + 0.5)) + (N - 1.0) * std::cos(k * (n - 0.5))) / denom;
            acc += static_cast<double>(sum_hp[pnode]) * kern;
        }
        rep.q_kernel[n] = 2.0 * acc / P;
    }

    const std::vector<hp_real> eta = eta_coeffs_hp(grid, velocities);
    const std::vector<hp_real> q_tri =
        q_from_eta_triangular(std::span<const hp_real>(eta), N);
    rep.q_triangular.resize(q_tri.size());
    for (size_t i = 0; i < q_tri.size(); ++i) {
        rep.q_triangular[i] = static_cast<double>(q_tri[i]);
        rep.max_abs_dev =
            std::max(rep.max_abs_dev, std::abs(rep.q_kernel[i] - rep.q_triangular[i]));
    }
    return rep;
}

ReconstructedField reconstruct_state(std::span<const double> q,
                                     std::span<const double> dq, int n_rays,
                                     int ray_len) {
    const int N = n_rays, L = ray_len;
    if (static_cast<int>(q.size()) != L + 1)
        throw std::invalid_argument("reconstruct_state: q must have L + 1 entries");
    if (static_cast<int>(dq.size()) != N * L)
        throw std::invalid_argument("reconstruct_state: dq must have N * L entries");

    double scale = 0.0;
    for (const double v : dq) scale = std::max(scale, std::abs(v));
    for (int n = 1; n <= L; ++n) {
        double cyc = 0.0;
        for (int r = 0; r < N; ++r) cyc += dq[static_cast<size_t>(r) * L + (n - 1)];
        if (std::abs(cyc) > 1e-10 * (1.0 + scale))
            throw std::invalid_argument(
                "reconstruct_state: inconsistent differences (cyclic sum nonzero)");
    }

    ReconstructedField out;
    out.center = q[0] / N;
    out.rays.assign(static_cast<size_t>(N) * L, 0.0);
    for (int r = 0; r < N; ++r) {
        for (int n = 1; n <= L; ++n) {
            double combo = 0.0;
            for (int m = 0; m < N; ++m)
                combo += (N - 1.0 - m) * dq[static_cast<size_t>((r + m) % N) * L + (n - 1)];
            out.rays[static_cast<size_t>(r) * L + (n - 1)] = (q[n] - combo) / N;
        }
    }
    return out;
}

double roundtrip(const StarState& s, const LatticeParams& p, int grid_size) {
    if (p.n_rays < 3)
        throw std::invalid_argument("roundtrip: inverse transform needs N >= 3");
    const ModeGrid grid = ModeGrid::sample(s, p, grid_size);

    const std::vector<double> dq_pos = delta_q(grid, false);
    const std::vector<double> dq_vel = delta_q(grid, true);

    auto q_of = [&](bool vel) {
        const std::vector<hp_real> eta = eta_coeffs_hp(grid, vel);
        const std::vector<hp_real> q_hp =
            q_from_eta_triangular(std::span<const hp_real>(eta), p.n_rays);
        std::vector<double> q(q_hp.size());
        std::transform(q_hp.begin(), q_hp.end(), q.begin(),
                       [](const hp_real& v) { return static_cast<double>(v); });
        return q;
    };
    const ReconstructedField pos = reconstruct_state(q_of(false), dq_pos, p.n_rays, p.ray_len);
    const ReconstructedField vel = reconstruct_state(q_of(true), dq_vel, p.n_rays, p.ray_len);

    double err = std::max(std::abs(pos.center - s.u()), std::abs(vel.center - s.u_dot()));
    for (int r = 0; r < p.n_rays; ++r)
        for (int n = 1; n <= p.ray_len; ++n) {
            const size_t i = static_cast<size_t>(r) * p.ray_len + (n - 1);
            err = std::max(err, std::abs(pos.rays[i] - s.phi(r, n)));
            err = std::max(err, std::abs(vel.rays[i] - s.phi_dot(r, n)));
        }
    return err;
}

}  // namespace starwave
