#include "starwave/run.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>

#include "starwave/mode_inversion.hpp"
#include "starwave/normal_modes.hpp"
#include "starwave/numerics.hpp"
#include "starwave/scattering.hpp"

namespace starwave {

namespace {

std::string num17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Csv {
  public:
    explicit Csv(const std::filesystem::path& path)
        : f_(path, std::ios::binary | std::ios::trunc) {
        if (!f_) throw std::runtime_error("cannot open output file " + path.string());
    }
    void text_row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) f_ << ',';
            f_ << cells[i];
        }
        f_ << '\n';
    }
    void row(const std::vector<double>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) f_ << ',';
            f_ << num17(cells[i]);
        }
        f_ << '\n';
    }

  private:
    std::ofstream f_;
};

std::vector<double> grid_points(const KGridSpec& g) {
    std::vector<double> ks(g.count);
    if (g.count == 1) {
        ks[0] = g.min;
        return ks;
    }
    for (int i = 0; i < g.count; ++i)
        ks[i] = g.min + (g.max - g.min) * i / (g.count - 1);
    return ks;
}

StarState random_state(const LatticeParams& p, std::mt19937_64& rng,
                       int support = -1) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StarState s = StarState::zero(p);
    const int smax = (support < 0) ? p.ray_len : support;
    s.u() = dist(rng);
    s.u_dot() = dist(rng);
    for (int r = 0; r < p.n_rays; ++r)
        for (int n = 1; n <= smax; ++n) {
            s.phi(r, n) = dist(rng);
            s.phi_dot(r, n) = dist(rng);
        }
    return s;
}

double unitarity_residual(const Reflection& refl, int n_rays) {
    const double r2 = std::norm(refl.r);
    const double t2 = std::norm(refl.r + 1.0);
    return std::abs(r2 + (n_rays - 1) * t2 - 1.0);
}

void run_dispersion(const RunConfig& cfg, const std::filesystem::path& out,
                    RunResult& res) {
    Csv csv(out);
    csv.text_row({"k", "omega"});
    for (const double k : grid_points(*cfg.k_grid))
        csv.row({k, dispersion(k, cfg.model)});
    res.outputs.push_back(out.string());
}

void run_reflection(const RunConfig& cfg, const std::filesystem::path& out,
                    RunResult& res) {
    Csv csv(out);
    csv.text_row({"k", "re_r_exact", "im_r_exact", "abs2_r_exact", "theta_exact",
                  "unitarity_residual_exact", "re_r_three_ray", "im_r_three_ray",
                  "abs2_r_three_ray", "theta_three_ray", "unitarity_residual_three_ray"});
    for (const double k : grid_points(*cfg.k_grid)) {
        const Reflection ex = reflection_exact(k, cfg.model);
        const Reflection pp =
            reflection_three_ray(k, cfg.model.center_mass, cfg.model.delta);
        csv.row({k, ex.r.real(), ex.r.imag(), std::norm(ex.r), std::arg(ex.phase),
                 unitarity_residual(ex, cfg.model.n_rays), pp.r.real(), pp.r.imag(),
                 std::norm(pp.r), std::arg(pp.phase), unitarity_residual(pp, 3)});
    }
    res.outputs.push_back(out.string());
}

void run_scatter(const RunConfig& cfg, const std::filesystem::path& out,
                 RunResult& res) {
    ScatterSeries series;
    const ReflectionMeasurement meas =
        measure_reflection(*cfg.packet, cfg.model, &series);
    const Reflection analytic = reflection_exact(cfg.packet->k0, cfg.model);
    const double r_ana = std::abs(analytic.r);
    const double rel_err = r_ana > 1e-12 ? std::abs(meas.r_abs - r_ana) / r_ana
                                         : std::abs(meas.r_abs - r_ana);

    Csv csv(out);
    csv.text_row({"k0", "R_analytic_abs", "R_measured_abs", "T_measured_abs",
                  "rel_err"});
    csv.row({meas.k0, r_ana, meas.r_abs, meas.t_abs, rel_err});
    res.outputs.push_back(out.string());

    std::filesystem::path series_path = out;
    series_path.replace_extension();
    series_path += "_timeseries.csv";
    Csv ts(series_path);
    std::vector<std::string> head{"t", "energy"};
    for (int r = 0; r < cfg.model.n_rays; ++r)
        head.push_back("centroid_ray_" + std::to_string(r + 1));
    ts.text_row(head);
    for (size_t i = 0; i < series.t.size(); ++i) {
        std::vector<double> row{series.t[i], series.energy[i]};
        row.insert(row.end(), series.centroid[i].begin(), series.centroid[i].end());
        ts.row(row);
    }
    res.outputs.push_back(series_path.string());
}

void run_modes_roundtrip(const RunConfig& cfg, const std::filesystem::path& out,
                         RunResult& res) {
    std::ofstream rep(out, std::ios::binary | std::ios::trunc);
    if (!rep) throw std::runtime_error("cannot open output file " + out.string());
    const RoundtripSpec& rt = *cfg.roundtrip;

    rep << "mode inversion round-trip report\n";
    rep << "seed " << cfg.seed << ", " << rt.num_states << " random states per case\n\n";
    for (const int n_rays : rt.n_rays_list) {
        for (const int ray_len : rt.ray_len_list) {
            std::vector<int> grids = rt.grid_sizes;
            if (grids.empty()) grids = {ray_len + 2, 4 * ray_len};
            for (const int grid : grids) {
                const LatticeParams p =
                    make_lattice(n_rays, ray_len, 1.0, cfg.model.mass, 1.0);
                std::mt19937_64 rng(cfg.seed ^ (static_cast<std::uint64_t>(n_rays) << 32 ^
                                                static_cast<std::uint64_t>(ray_len) << 16 ^
                                                static_cast<std::uint64_t>(grid)));
                double worst = 0.0;
                for (int i = 0; i < rt.num_states; ++i)
                    worst = std::max(worst, roundtrip(random_state(p, rng), p, grid));
                rep << "N=" << n_rays << " L=" << ray_len << " P=" << grid
                    << " max_roundtrip_error=" << num17(worst) << "\n";
            }
        }
    }

    rep << "\nclosed-form kernel vs triangular back-substitution\n";
    for (const int n_rays : rt.n_rays_list) {
        const int ray_len = rt.ray_len_list.front();
        const int grid = 4 * ray_len;
        const LatticeParams p = make_lattice(n_rays, ray_len, 1.0, cfg.model.mass, 1.0);
        std::mt19937_64 rng(cfg.seed + n_rays);
        const StarState s = random_state(p, rng);
        const ModeGrid g = ModeGrid::sample(s, p, grid);
        const KernelReport kr = q_from_eta_kernel(g);
        rep << "N=" << n_rays << " L=" << ray_len << " P=" << grid
            << " max|Q_kernel - Q_triangular|=" << num17(kr.max_abs_dev) << "\n";
        rep << "  n, Q_kernel, Q_triangular\n";
        for (size_t n = 0; n < kr.q_kernel.size(); ++n)
            rep << "  " << n << ", " << num17(kr.q_kernel[n]) << ", "
                << num17(kr.q_triangular[n]) << "\n";
    }
    res.outputs.push_back(out.string());
}

void run_continuum(const RunConfig& cfg, const std::filesystem::path& out,
                   RunResult& res) {
    const ContinuumSpec& c = *cfg.continuum;
    const ContinuumParams cp{c.k1};
    const std::vector<double> errs = continuum_limit_check(c.k, cp, c.deltas);
    const double order = fit_loglog_order(c.deltas, errs);

    Csv csv(out);
    csv.text_row({"delta", "phase_error", "fitted_order"});
    for (size_t i = 0; i < errs.size(); ++i)
        csv.row({c.deltas[i], errs[i], order});
    res.outputs.push_back(out.string());
}

// ---- verify: the library's invariant suite ---------------------------------

struct Check {
    std::string name;
    std::function<std::pair<bool, std::string>()> fn;
};

StarState lin_comb(double a, const StarState& s1, double b, const StarState& s2) {
    StarState out = s1;
    for (size_t i = 0; i < out.pos.size(); ++i) {
        out.pos[i] = a * s1.pos[i] + b * s2.pos[i];
        out.vel[i] = a * s1.vel[i] + b * s2.vel[i];
    }
    return out;
}

double max_abs_diff(const StarState& s1, const StarState& s2) {
    double m = 0.0;
    for (size_t i = 0; i < s1.pos.size(); ++i) {
        m = std::max(m, std::abs(s1.pos[i] - s2.pos[i]));
        m = std::max(m, std::abs(s1.vel[i] - s2.vel[i]));
    }
    return m;
}

int run_verify(const RunConfig& cfg, const std::filesystem::path& out,
               RunResult& res) {
    std::vector<Check> checks;
    const std::uint64_t seed = cfg.seed;

    auto bounded = [](double value, double tol) {
        return std::make_pair(value <= tol,
                              "max " + num17(value) + ", tol " + num17(tol));
    };

    checks.push_back({"acceleration linearity", [&] {
        const LatticeParams p = make_lattice(3, 24, 0.7, 0.8, 1.7);
        std::mt19937_64 rng(seed);
        const StarState s1 = random_state(p, rng), s2 = random_state(p, rng);
        const StarState mix = lin_comb(0.37, s1, -1.21, s2);
        const Accel a1 = acceleration(s1, p), a2 = acceleration(s2, p),
                    am = acceleration(mix, p);
        double dev = 0.0;
        for (int i = 0; i < p.dof(); ++i)
            dev = std::max(dev, std::abs(am.a[i] - 0.37 * a1.a[i] + 1.21 * a2.a[i]));
        return bounded(dev, 1e-12 * 100.0);
    }});

    checks.push_back({"acceleration matches quadratic form", [&] {
        const LatticeParams p = make_lattice(4, 16, 0.9, 0.5, 0.6);
        std::mt19937_64 rng(seed + 1);
        const StarState s = random_state(p, rng);
        const Accel a = acceleration(s, p);
        const Eigen::MatrixXd h = build_quadratic_form(p);
        const Eigen::VectorXd d = mass_diagonal(p).cwiseSqrt();
        Eigen::Map<const Eigen::VectorXd> x(s.pos.data(), p.dof());
        const Eigen::VectorXd ref = -(h * (d.cwiseProduct(x))).cwiseQuotient(d);
        double dev = 0.0;
        for (int i = 0; i < p.dof(); ++i) dev = std::max(dev, std::abs(a.a[i] - ref[i]));
        return bounded(dev, 1e-12 * 100.0);
    }});

    checks.push_back({"energy positive definite", [&] {
        const LatticeParams p = make_lattice(3, 20, 1.0, 1.0, 2.0);
        std::mt19937_64 rng(seed + 2);
        const double e_rand = energy(random_state(p, rng), p);
        const double e_zero = energy(StarState::zero(p), p);
        const bool ok = e_rand > 0.0 && e_zero == 0.0;
        return std::make_pair(ok, "random " + num17(e_rand) + ", zero " + num17(e_zero));
    }});

    checks.push_back({"verlet reversibility", [&] {
        const LatticeParams p = make_lattice(3, 32, 1.0, 0.5, 1.2);
        std::mt19937_64 rng(seed + 3);
        const StarState s0 = random_state(p, rng);
        StarState s = s0;
        const double dt = default_dt(p);
        evolve_verlet(s, p, dt, 400);
        evolve_verlet(s, p, -dt, 400);
        return bounded(max_abs_diff(s, s0), 1e-9);
    }});

    checks.push_back({"verlet energy bound on smooth state", [&] {
        const LatticeParams p = make_lattice(3, 96, 1.0, 0.0, 1.0);
        const ExactEvolver ev(p);
        StarState s = StarState::zero(p);
        const Eigen::VectorXd ground = ev.eigenvectors().col(0);
        const Eigen::VectorXd d = mass_diagonal(p).cwiseSqrt();
        for (int i = 0; i < p.dof(); ++i) s.pos[i] = ground[i] / d[i];
        const double e0 = energy(s, p);
        evolve_verlet(s, p, default_dt(p), 2000);
        return bounded(std::abs(energy(s, p) - e0) / e0, 1e-6);
    }});

    checks.push_back({"exact evolution conserves energy", [&] {
        const LatticeParams p = make_lattice(3, 30, 1.0, 0.7, 1.4);
        std::mt19937_64 rng(seed + 4);
        const StarState s = random_state(p, rng);
        const double e0 = energy(s, p);
        const double e1 = energy(evolve_exact(s, p, 37.3), p);
        return bounded(std::abs(e1 - e0) / e0, 1e-10);
    }});

    checks.push_back({"exact evolution linear", [&] {
        const LatticeParams p = make_lattice(3, 20, 1.0, 0.3, 0.9);
        std::mt19937_64 rng(seed + 5);
        const StarState s1 = random_state(p, rng), s2 = random_state(p, rng);
        const ExactEvolver ev(p);
        const StarState lhs = ev.evolve(lin_comb(0.6, s1, -1.3, s2), 11.0);
        const StarState rhs = lin_comb(0.6, ev.evolve(s1, 11.0), -1.3, ev.evolve(s2, 11.0));
        return bounded(max_abs_diff(lhs, rhs), 1e-10);
    }});

    checks.push_back({"chebyshev matches exact oracle", [&] {
        const LatticeParams p = make_lattice(3, 40, 1.0, 0.4, 0.8);
        std::mt19937_64 rng(seed + 6);
        const StarState s = random_state(p, rng);
        StarState cheb = s;
        ChebyshevPropagator(p).advance(cheb, 25.0);
        return bounded(max_abs_diff(cheb, evolve_exact(s, p, 25.0)), 1e-9);
    }});

    checks.push_back({"reflection unitarity", [&] {
        double worst = 0.0;
        for (int n = 2; n <= 6; ++n)
            for (const double m_ctr : {0.5, 1.0, 1.5, 3.0})
                for (const double m : {0.0, 1.0}) {
                    const LatticeParams p = make_lattice(n, 2, 1.0, m, m_ctr);
                    for (int i = 0; i < 64; ++i) {
                        const double k = std::numbers::pi * (i + 0.5) / 64.0;
                        worst = std::max(worst,
                                         unitarity_residual(reflection_exact(k, p), n));
                    }
                }
        return bounded(worst, 1e-12);
    }});

    checks.push_back({"three-ray closed form", [&] {
        double worst = 0.0;
        for (const double m_ctr : {0.5, 1.0, 1.5, 3.0}) {
            const LatticeParams p = make_lattice(3, 2, 1.0, 0.0, m_ctr);
            for (int i = 0; i < 64; ++i) {
                const double k = std::numbers::pi * (i + 0.5) / 64.0;
                worst = std::max(worst, std::abs(reflection_exact(k, p).r -
                                                 reflection_three_ray(k, m_ctr, 1.0).r));
            }
        }
        const LatticeParams p1 = make_lattice(3, 2, 1.0, 0.0, 1.0);
        worst = std::max(worst, std::abs(reflection_exact(std::numbers::pi / 2, p1).r -
                                         std::complex<double>(-0.4, -0.2)));
        return bounded(worst, 1e-12);
    }});

    checks.push_back({"junction residual", [&] {
        double worst = 0.0;
        for (int n = 2; n <= 5; ++n)
            for (const double m_ctr : {0.5, 1.0, 2.0})
                for (const double m : {0.0, 1.0}) {
                    const LatticeParams p = make_lattice(n, 2, 0.8, m, m_ctr);
                    for (int i = 0; i < 32; ++i) {
                        const double k = std::numbers::pi * (i + 0.5) / (32.0 * 0.8);
                        const Reflection refl = reflection_exact(k, p);
                        worst = std::max(worst, std::abs(junction_residual(k, refl.r, p)));
                    }
                }
        return bounded(worst, 1e-12);
    }});

    checks.push_back({"constant reflection cases", [&] {
        double worst = 0.0;
        const LatticeParams p3 = make_lattice(3, 2, 1.0, 0.0, 1.5);
        for (int i = 0; i < 64; ++i) {
            const double k = std::numbers::pi * (i + 0.5) / 64.0;
            worst = std::max(worst,
                             std::abs(reflection_exact(k, p3).r + 1.0 / 3.0));
        }
        for (const double m : {0.0, 1.0}) {
            const LatticeParams p2 = make_lattice(2, 2, 1.0, m, 1.0);
            for (int i = 0; i < 64; ++i) {
                const double k = std::numbers::pi * (i + 0.5) / 64.0;
                worst = std::max(worst, std::abs(reflection_exact(k, p2).r));
            }
        }
        return bounded(worst, 1e-12);
    }});

    checks.push_back({"mode forms agree at unit center mass", [&] {
        const LatticeParams p = make_lattice(4, 20, 1.0, 0.6, 1.0);
        std::mt19937_64 rng(seed + 7);
        const StarState s = random_state(p, rng);
        double worst = 0.0;
        for (const double k : {0.31, 1.17, 2.64}) {
            const ModeSpectrum reduced = xi_transform(s, k, p);
            const ModeSpectrum general = xi_transform_general(s, k, p);
            for (int r = 0; r < p.n_rays; ++r)
                worst = std::max(worst,
                                 std::abs(general.xi[r] -
                                          2.0 * std::sin(0.5 * k) * reduced.xi[r]));
        }
        return bounded(worst, 1e-12 * 100.0);
    }});

    checks.push_back({"mode transform linear", [&] {
        const LatticeParams p = make_lattice(3, 18, 1.0, 0.2, 1.8);
        std::mt19937_64 rng(seed + 8);
        const StarState s1 = random_state(p, rng), s2 = random_state(p, rng);
        const StarState mix = lin_comb(1.7, s1, 0.4, s2);
        double worst = 0.0;
        for (const double k : {0.5, 2.2}) {
            const ModeSpectrum m1 = xi_transform(s1, k, p), m2 = xi_transform(s2, k, p),
                               mm = xi_transform(mix, k, p);
            for (int r = 0; r < p.n_rays; ++r)
                worst = std::max(worst, std::abs(mm.xi[r] - 1.7 * m1.xi[r] - 0.4 * m2.xi[r]));
        }
        return bounded(worst, 1e-12 * 100.0);
    }});

    checks.push_back({"mode decoupling", [&] {
        const LatticeParams p = make_lattice(3, 96, 1.0, 1.0, 0.8);
        std::mt19937_64 rng(seed + 9);
        const StarState s = random_state(p, rng, 24);
        const double ks[] = {0.9, 2.1};
        const double times[] = {10.0, 20.0, 30.0};
        const DecouplingReport rep = verify_decoupling(s, p, ks, times);
        return bounded(std::max(rep.max_xi_dev, rep.max_xi0_residual), 1e-8);
    }});

    checks.push_back({"inverse round trip", [&] {
        std::mt19937_64 rng(seed + 10);
        const LatticeParams p3 = make_lattice(3, 16, 1.0, 0.0, 1.0);
        const LatticeParams p5 = make_lattice(5, 12, 1.0, 0.5, 1.0);
        double worst = roundtrip(random_state(p3, rng), p3, 18);
        worst = std::max(worst, roundtrip(random_state(p5, rng), p5, 48));
        return bounded(worst, 1e-10);
    }});

    checks.push_back({"eta matches direct sums", [&] {
        const LatticeParams p = make_lattice(4, 14, 1.0, 0.0, 1.0);
        std::mt19937_64 rng(seed + 11);
        const StarState s = random_state(p, rng);
        const ModeGrid g = ModeGrid::sample(s, p, 4 * p.ray_len);
        const std::vector<double> eta = eta_coeffs(g);
        const ChainSums cs = chain_sums_from_state(s);
        double worst = 0.0;
        for (size_t n = 0; n < eta.size(); ++n)
            worst = std::max(worst, std::abs(eta[n] - cs.eta[n]));
        return bounded(worst, 1e-10);
    }});

    checks.push_back({"mode sum expansion", [&] {
        const LatticeParams p = make_lattice(3, 12, 1.0, 0.0, 1.0);
        std::mt19937_64 rng(seed + 12);
        const StarState s = random_state(p, rng);
        const ModeGrid g = ModeGrid::sample(s, p, p.ray_len + 2);
        const ChainSums cs = chain_sums_from_state(s);
        double worst = 0.0;
        for (int pnode = 0; pnode < g.size; ++pnode) {
            const double k = g.nodes[pnode];
            double sum = 0.0;
            for (int r = 0; r < p.n_rays; ++r)
                sum += g.xi[static_cast<size_t>(pnode) * p.n_rays + r];
            double expansion = 0.0;
            for (int n = 0; n <= p.ray_len; ++n)
                expansion += cs.eta[n] * std::cos(k * (n + 0.5));
            worst = std::max(worst, std::abs(sum - expansion));
        }
        return bounded(worst, 1e-10);
    }});

    checks.push_back({"reconstruct inverts sums", [&] {
        const LatticeParams p = make_lattice(5, 10, 1.0, 0.0, 1.0);
        std::mt19937_64 rng(seed + 13);
        const StarState s = random_state(p, rng);
        const ChainSums cs = chain_sums_from_state(s);
        const ReconstructedField rec =
            reconstruct_state(cs.q, cs.dq, p.n_rays, p.ray_len);
        double worst = std::abs(rec.center - s.u());
        for (int r = 0; r < p.n_rays; ++r)
            for (int n = 1; n <= p.ray_len; ++n)
                worst = std::max(worst,
                                 std::abs(rec.rays[static_cast<size_t>(r) * p.ray_len +
                                                   (n - 1)] -
                                          s.phi(r, n)));
        return bounded(worst, 1e-12 * 10.0);
    }});

    std::ofstream rep(out, std::ios::binary | std::ios::trunc);
    if (!rep) throw std::runtime_error("cannot open output file " + out.string());
    int failures = 0;
    for (const Check& c : checks) {
        std::pair<bool, std::string> r;
        try {
            r = c.fn();
        } catch (const std::exception& e) {
            r = {false, std::string("exception: ") + e.what()};
        }
        const std::string line =
            (r.first ? "ok   " : "FAIL ") + c.name + " (" + r.second + ")";
        std::cout << line << "\n";
        rep << line << "\n";
        if (!r.first) ++failures;
    }
    const std::string tail = std::to_string(checks.size() - failures) + "/" +
                             std::to_string(checks.size()) + " checks passed";
    std::cout << tail << "\n";
    rep << tail << "\n";
    res.outputs.push_back(out.string());
    return failures == 0 ? 0 : 2;
}

}  // namespace

RunResult run(const RunConfig& cfg, const std::string& out_dir) {
    RunResult res;
    const std::filesystem::path dir = out_dir.empty() ? "." : out_dir;
    std::filesystem::create_directories(dir);
    const std::filesystem::path out = dir / cfg.output;

    switch (cfg.command) {
        case Command::dispersion: run_dispersion(cfg, out, res); break;
        case Command::reflection: run_reflection(cfg, out, res); break;
        case Command::scatter: run_scatter(cfg, out, res); break;
        case Command::modes_roundtrip: run_modes_roundtrip(cfg, out, res); break;
        case Command::continuum: run_continuum(cfg, out, res); break;
        case Command::verify: res.exit_code = run_verify(cfg, out, res); break;
    }
    for (const std::string& f : res.outputs) std::cout << "wrote " << f << "\n";
    return res;
}

}  // namespace starwave
