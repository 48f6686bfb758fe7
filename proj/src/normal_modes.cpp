#include "starwave/normal_modes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace starwave {

namespace {

void check_unit_spacing(const LatticeParams& p, const char* who) {
    if (p.delta != 1.0)
        throw std::invalid_argument(std::string(who) +
                                    ": mode transforms fix delta = 1; rescale first");
}

void check_wavenumber(double k, const char* who) {
    if (!(k > 0.0) || !(k < std::numbers::pi))
        throw std::invalid_argument(std::string(who) + ": need 0 < k < pi");
}

// cos/sin sums over one contiguous ray of values, site indices 1..L.
void ray_sums(const double* v, int len, double k, double& out_c, double& out_s) {
    const double ck = std::cos(k), sk = std::sin(k);
    double c = 1.0, s = 0.0;  // cos(k*0), sin(k*0)
    double sum_c = 0.0, sum_s = 0.0;
    for (int n = 0; n < len; ++n) {
        const double c_next = c * ck - s * sk;
        const double s_next = s * ck + c * sk;
        c = c_next;
        s = s_next;
        sum_c += v[n] * c;
        sum_s += v[n] * s;
    }
    out_c = sum_c;
    out_s = sum_s;
}

struct XiParts {
    double xi0;
    std::vector<double> xi;
};

// Combination applied to one field (displacements or velocities); `reduced`
// selects the form divided by 2 sin(k/2).
XiParts combine(const std::vector<double>& field, double center, int n_rays,
                int ray_len, double k, double coeff, double center_mass,
                bool reduced) {
    XiParts parts;
    parts.xi = std::vector<double>(n_rays, 0.0);
    double xi0 = center_mass * center;
    std::vector<double> ps(n_rays);
    for (int r = 0; r < n_rays; ++r) {
        double pc, s;
        ray_sums(field.data() + 1 + r * ray_len, ray_len, k, pc, s);
        xi0 += pc;
        ps[r] = s;
    }
    parts.xi0 = xi0;
    if (reduced) {
        const double ch = std::cos(0.5 * k), sh = std::sin(0.5 * k);
        for (int r = 0; r < n_rays; ++r)
            parts.xi[r] = ch * xi0 + (n_rays - 2.0) * sh * ps[r];
    } else {
        const double sk = std::sin(k);
        for (int r = 0; r < n_rays; ++r) parts.xi[r] = sk * xi0 + coeff * ps[r];
    }
    return parts;
}

ModeSpectrum transform_impl(const StarState& s, double k, const LatticeParams& p,
                            bool reduced) {
    check_unit_spacing(p, "xi_transform");
    check_wavenumber(k, "xi_transform");
    if (!s.shape_matches(p))
        throw std::invalid_argument("xi_transform: state shape does not match params");

    ModeSpectrum out;
    out.k = k;
    out.coeff_c = mode_coupling_coeff(k, p);
    XiParts xp = combine(s.pos, s.u(), p.n_rays, p.ray_len, k, out.coeff_c,
                         p.center_mass, reduced);
    XiParts vp = combine(s.vel, s.u_dot(), p.n_rays, p.ray_len, k, out.coeff_c,
                         p.center_mass, reduced);
    out.xi0 = xp.xi0;
    out.xi = std::move(xp.xi);
    out.xi0_dot = vp.xi0;
    out.xi_dot = std::move(vp.xi);
    return out;
}

}  // namespace

RaySpectra ray_spectra(const StarState& s, double k) {
    check_wavenumber(k, "ray_spectra");
    RaySpectra out;
    out.k = k;
    out.phi_c.resize(s.n_rays);
    out.phi_s.resize(s.n_rays);
    out.phi.resize(s.n_rays);
    for (int r = 0; r < s.n_rays; ++r) {
        ray_sums(s.pos.data() + 1 + r * s.ray_len, s.ray_len, k, out.phi_c[r],
                 out.phi_s[r]);
        std::complex<double> acc = 0.0;
        for (int n = 1; n <= s.ray_len; ++n)
            acc += std::polar(s.phi(r, n), k * n);
        out.phi[r] = acc;
    }
    return out;
}

double mode_coupling_coeff(double k, const LatticeParams& p) {
    return (p.n_rays - 2.0 * p.center_mass) * (1.0 - std::cos(k)) +
           (1.0 - p.center_mass) * p.mass * p.mass;
}

ModeSpectrum xi_transform(const StarState& s, double k, const LatticeParams& p) {
    return transform_impl(s, k, p, p.center_mass == 1.0);
}

ModeSpectrum xi_transform_general(const StarState& s, double k,
                                  const LatticeParams& p) {
    return transform_impl(s, k, p, false);
}

DecouplingReport verify_decoupling(const StarState& s, const LatticeParams& p,
                                   std::span<const double> ks,
                                   std::span<const double> times) {
    const ExactEvolver evolver(p);
    return verify_decoupling(s, p, ks, times, evolver);
}

DecouplingReport verify_decoupling(const StarState& s, const LatticeParams& p,
                                   double k, std::span<const double> times) {
    return verify_decoupling(s, p, std::span<const double>{&k, 1}, times);
}

DecouplingReport verify_decoupling(const StarState& s, const LatticeParams& p,
                                   std::span<const double> ks,
                                   std::span<const double> times,
                                   const ExactEvolver& evolver) {
    check_unit_spacing(p, "verify_decoupling");
    if (!s.shape_matches(p))
        throw std::invalid_argument("verify_decoupling: state shape mismatch");

    int support_max = 0;
    for (int r = 0; r < p.n_rays; ++r)
        for (int n = p.ray_len; n >= 1; --n)
            if (s.phi(r, n) != 0.0 || s.phi_dot(r, n) != 0.0) {
                support_max = std::max(support_max, n);
                break;
            }
    double t_max = 0.0;
    for (const double t : times) t_max = std::max(t_max, std::abs(t));
    if (support_max + t_max > p.ray_len - 8)
        throw std::invalid_argument(
            "verify_decoupling: horizon violated (support + t exceeds L - 8)");

    std::vector<ModeSpectrum> init;
    init.reserve(ks.size());
    for (const double k : ks) init.emplace_back(xi_transform(s, k, p));

    DecouplingReport rep;
    for (const double t : times) {
        const StarState evolved = evolver.evolve(s, t);
        const Accel acc = acceleration(evolved, p);
        for (size_t ik = 0; ik < ks.size(); ++ik) {
            const double k = ks[ik];
            const double omega = dispersion(k, p);
            const ModeSpectrum now = xi_transform(evolved, k, p);
            const double c = std::cos(omega * t);
            const double sc = std::sin(omega * t) / omega;
            for (int r = 0; r < p.n_rays; ++r) {
                const double pred = init[ik].xi[r] * c + init[ik].xi_dot[r] * sc;
                rep.max_xi_dev = std::max(rep.max_xi_dev, std::abs(now.xi[r] - pred));
            }
            // Driven residual for xi_0 from the instantaneous accelerations.
            double xi0_dd = p.center_mass * acc.a_u();
            for (int r = 0; r < p.n_rays; ++r) {
                double ac, as;
                ray_sums(acc.a.data() + 1 + r * p.ray_len, p.ray_len, k, ac, as);
                xi0_dd += ac;
            }
            const double resid =
                xi0_dd + omega * omega * now.xi0 + now.coeff_c * evolved.u();
            rep.max_xi0_residual = std::max(rep.max_xi0_residual, std::abs(resid));
        }
    }
    return rep;
}

}  // namespace starwave
