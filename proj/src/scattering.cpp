#include "starwave/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace starwave {

namespace {

constexpr std::complex<double> kImag{0.0, 1.0};

void check_band_interior(double k, double delta, const char* who) {
    const double kd = k * delta;
    if (!(kd > 0.0) || !(kd < std::numbers::pi))
        throw std::invalid_argument(std::string(who) +
                                    ": need 0 < k*delta < pi (band edges are degenerate)");
}

}  // namespace

Reflection reflection_exact(double k, const LatticeParams& p) {
    check_band_interior(k, p.delta, "reflection_exact");
    const double n = p.n_rays;
    const double m_ctr = p.center_mass;
    const double s = std::sin(0.5 * k * p.delta);
    const double c = std::cos(0.5 * k * p.delta);
    const double m2d2 = p.mass * p.mass * p.delta * p.delta;

    // Center equation of motion under the scattering ansatz reduces to a
    // unimodular phase: numerator and denominator are complex conjugates.
    const double re = (4.0 * m_ctr - 2.0 * n) * s * s + (m_ctr - 1.0) * m2d2;
    const double im = 2.0 * n * s * c;
    const std::complex<double> phase = -std::complex<double>(re, -im) /
                                        std::complex<double>(re, im);

    Reflection out;
    out.k = k;
    out.phase = phase;
    out.r = phase / n - (n - 1.0) / n;
    return out;
}

Reflection reflection_three_ray(double k, double center_mass, double delta) {
    const std::complex<double> phase = theta_three_ray(k, center_mass, delta);
    Reflection out;
    out.k = k;
    out.phase = phase;
    out.r = phase / 3.0 - 2.0 / 3.0;
    return out;
}

std::complex<double> theta_three_ray(double k, std::complex<double> center_mass,
                                    double delta) {
    check_band_interior(k, delta, "theta_three_ray");
    const double s = std::sin(0.5 * k * delta);
    const double c = std::cos(0.5 * k * delta);
    const std::complex<double> w = (2.0 * center_mass - 3.0) * s;
    return -(w - 3.0 * kImag * c) / (w + 3.0 * kImag * c);
}

std::complex<double> junction_residual(double k, std::complex<double> r,
                                       const LatticeParams& p) {
    const double n = p.n_rays;
    const double inv_d2 = 1.0 / (p.delta * p.delta);
    const double m2 = p.mass * p.mass;
    const double omega = dispersion(k, p);
    const std::complex<double> e_plus = std::exp(kImag * k * p.delta);
    const std::complex<double> e_minus = std::exp(-kImag * k * p.delta);

    const std::complex<double> u = r + 1.0;
    const std::complex<double> first_site_sum =
        (e_minus + r * e_plus) + (n - 1.0) * u * e_plus;
    return -p.center_mass * omega * omega * u -
           (inv_d2 * (first_site_sum - n * u) - m2 * u);
}

std::complex<double> theta_continuum(double k, const ContinuumParams& c) {
    if (std::abs(c.k1) == 0.0)
        throw std::invalid_argument("theta_continuum: k1 must be nonzero");
    const std::complex<double> denom = k + c.k1;
    if (std::abs(denom) < 1e-300 * (1.0 + std::abs(k)))
        throw std::invalid_argument("theta_continuum: pole at k = -k1");
    return -(k - c.k1) / denom;
}

std::complex<double> reflection_continuum(double k, const ContinuumParams& c) {
    return theta_continuum(k, c) / 3.0 - 2.0 / 3.0;
}

std::vector<double> continuum_limit_check(double k, const ContinuumParams& c,
                                          std::vector<double> deltas) {
    if (deltas.empty())
        throw std::invalid_argument("continuum_limit_check: empty delta list");
    for (size_t i = 0; i < deltas.size(); ++i) {
        if (!(deltas[i] > 0.0))
            throw std::invalid_argument("continuum_limit_check: deltas must be positive");
        if (i > 0 && !(deltas[i] < deltas[i - 1]))
            throw std::invalid_argument(
                "continuum_limit_check: deltas must be strictly decreasing");
    }
    const std::complex<double> target = theta_continuum(k, c);
    std::vector<double> errs;
    errs.reserve(deltas.size());
    for (const double d : deltas) {
        const std::complex<double> scaled_mass = 3.0 * kImag / (c.k1 * d);
        errs.push_back(std::abs(theta_three_ray(k, scaled_mass, d) - target));
    }
    return errs;
}

ReflectionMeasurement measure_reflection(const PacketSpec& spec,
                                         const LatticeParams& p,
                                         ScatterSeries* series) {
    if (spec.direction != Direction::toward_junction)
        throw std::invalid_argument("measure_reflection: packet must move toward the junction");
    StarState state = init_packet(spec, p);

    const double omega0 = dispersion(spec.k0, p);
    const double vg = group_velocity(spec.k0, p);
    const double t_final = 2.0 * spec.center * p.delta / vg;
    if (t_final > packet_time_horizon(spec, p))
        throw std::invalid_argument(
            "measure_reflection: packet escaped domain (needs 3*center + 4*sigma <= L)");

    // Envelope width after dispersive spreading, in sites.
    const double h = 1e-5;
    const double d2w = (group_velocity(spec.k0 + h, p) - group_velocity(spec.k0 - h, p)) / (2.0 * h);
    const double sig2 = spec.width * spec.width * p.delta * p.delta;
    const double sigma_t = spec.width * std::sqrt(1.0 + std::pow(d2w * t_final / sig2, 2.0));
    const int window_start = std::max(32, static_cast<int>(spec.center - 8.0 * sigma_t));
    if (window_start >= spec.center - 2.0 * sigma_t)
        throw std::invalid_argument("measure_reflection: dispersed packet overlaps the junction");

    const int L = p.ray_len;
    // Carrier amplitude of e^{s_k i k0 delta n} content in the complex signal
    // phi + i phi_dot/omega0 over [n_lo, n_hi] of one ray.
    auto carrier = [&](const StarState& s, int ray, int n_lo, int n_hi,
                       double kernel_sign) {
        std::complex<double> acc = 0.0;
        for (int n = n_lo; n <= n_hi; ++n) {
            const std::complex<double> z(s.phi(ray, n), s.phi_dot(ray, n) / omega0);
            acc += z * std::exp(kImag * (kernel_sign * spec.k0 * p.delta * n));
        }
        return acc;
    };

    const std::complex<double> s_inc = carrier(state, spec.ray, 1, L, +1.0);
    if (std::abs(s_inc) < 1e-6)
        throw std::runtime_error("measure_reflection: carrier amplitude below noise floor");

    const double e0 = energy(state, p);
    const ChebyshevPropagator prop(p);

    if (series != nullptr) {
        const int n_samples = 40;
        series->t.clear();
        series->energy.clear();
        series->centroid.clear();
        double t_now = 0.0;
        for (int i = 0; i <= n_samples; ++i) {
            const double t_target = t_final * i / n_samples;
            if (i > 0) prop.advance(state, t_target - t_now);
            t_now = t_target;
            series->t.push_back(t_now);
            series->energy.push_back(energy(state, p));
            std::vector<double> cent(p.n_rays, 0.0);
            for (int r = 0; r < p.n_rays; ++r) {
                double wsum = 0.0, msum = 0.0;
                for (int n = 1; n <= L; ++n) {
                    const double zr = state.phi(r, n);
                    const double zi = state.phi_dot(r, n) / omega0;
                    const double rho = zr * zr + zi * zi;
                    wsum += rho * n;
                    msum += rho;
                }
                cent[r] = (msum > 1e-300) ? wsum / msum : 0.0;
            }
            series->centroid.push_back(std::move(cent));
        }
    } else {
        prop.advance(state, t_final);
    }

    const std::complex<double> s_refl = carrier(state, spec.ray, window_start, L, -1.0);
    std::vector<double> t_abs;
    for (int r = 0; r < p.n_rays; ++r) {
        if (r == spec.ray) continue;
        t_abs.push_back(std::abs(carrier(state, r, window_start, L, -1.0)) / std::abs(s_inc));
    }

    ReflectionMeasurement out;
    out.k0 = spec.k0;
    out.incident_amp = std::abs(s_inc);
    out.r_abs = std::abs(s_refl) / std::abs(s_inc);
    double arg = std::arg(s_refl / s_inc) + omega0 * t_final;
    arg = std::remainder(arg, 2.0 * std::numbers::pi);
    out.r_arg = arg;
    out.t_abs = t_abs.front();
    const auto [lo_it, hi_it] = std::minmax_element(t_abs.begin(), t_abs.end());
    out.transmit_spread = *hi_it - *lo_it;
    out.energy_drift = std::abs(energy(state, p) - e0) / e0;
    out.t_final = t_final;
    return out;
}

}  // namespace starwave
