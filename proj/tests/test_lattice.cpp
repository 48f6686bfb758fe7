#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "starwave/lattice.hpp"

using namespace starwave;

namespace {

StarState random_state(const LatticeParams& p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StarState s = StarState::zero(p);
    for (int i = 0; i < p.dof(); ++i) {
        s.pos[i] = dist(rng);
        s.vel[i] = dist(rng);
    }
    return s;
}

}  // namespace

TEST_CASE("make_lattice validates ranges") {
    CHECK_NOTHROW(make_lattice(3, 100, 1.0, 0.0, 1.0));
    CHECK_THROWS_WITH_AS(make_lattice(1, 100, 1.0, 0.0, 1.0),
                         doctest::Contains("n_rays"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_lattice(3, 100, 0.0, 0.0, 1.0),
                         doctest::Contains("delta"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_lattice(3, 1, 1.0, 0.0, 1.0),
                         doctest::Contains("ray_len"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_lattice(3, 100, 1.0, -0.5, 1.0),
                         doctest::Contains("mass"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(make_lattice(3, 100, 1.0, 0.0, 0.0),
                         doctest::Contains("center_mass"), std::invalid_argument);
}

TEST_CASE("dispersion relation") {
    const LatticeParams p1 = make_lattice(3, 10, 0.37, 1.0, 1.0);
    CHECK(dispersion(0.0, p1) == doctest::Approx(1.0).epsilon(1e-14));

    const LatticeParams p2 = make_lattice(3, 10, 1.0, 0.0, 1.0);
    CHECK(dispersion(std::numbers::pi, p2) == doctest::Approx(2.0).epsilon(1e-14));

    // Small k delta: omega^2 -> k^2 + m^2 (relativistic limit).
    const LatticeParams p3 = make_lattice(3, 10, 0.001, 0.5, 1.0);
    const double w2 = std::pow(dispersion(0.01, p3), 2);
    CHECK(w2 == doctest::Approx(0.01 * 0.01 + 0.25).epsilon(1e-4));

    // 2 pi / delta periodicity.
    const double k = 0.83;
    CHECK(dispersion(k, p2) ==
          doctest::Approx(dispersion(k + 2.0 * std::numbers::pi, p2)).epsilon(1e-12));
}

TEST_CASE("acceleration hand values: displaced center") {
    for (const double m : {0.0, 0.5}) {
        for (const double m_ctr : {1.0, 2.0}) {
            const LatticeParams p = make_lattice(3, 8, 1.0, m, m_ctr);
            StarState s = StarState::zero(p);
            s.u() = 1.0;
            const Accel a = acceleration(s, p);
            CHECK(a.a_u() == doctest::Approx(-(3.0 + m * m) / m_ctr).epsilon(1e-14));
            for (int r = 0; r < 3; ++r)
                CHECK(a.a_phi(r, 1) == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(a.a_phi(0, 2) == doctest::Approx(m * m * 0.0));
        }
    }
}

TEST_CASE("acceleration hand values: displaced first site") {
    const LatticeParams p = make_lattice(3, 8, 1.0, 0.0, 2.5);
    StarState s = StarState::zero(p);
    s.phi(0, 1) = 1.0;
    const Accel a = acceleration(s, p);
    CHECK(a.a_u() == doctest::Approx(1.0 / 2.5).epsilon(1e-14));
    CHECK(a.a_phi(0, 1) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(a.a_phi(0, 2) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(a.a_phi(0, 3) == 0.0);
    CHECK(a.a_phi(1, 1) == 0.0);
    CHECK(a.a_phi(2, 2) == 0.0);
}

TEST_CASE("acceleration rejects shape mismatch") {
    const LatticeParams p = make_lattice(3, 8, 1.0, 0.0, 1.0);
    const LatticeParams q = make_lattice(4, 8, 1.0, 0.0, 1.0);
    const StarState s = StarState::zero(p);
    CHECK_THROWS_AS(acceleration(s, q), std::invalid_argument);
    CHECK_THROWS_AS(energy(s, q), std::invalid_argument);
}

TEST_CASE("energy hand values") {
    SUBCASE("zero state") {
        const LatticeParams p = make_lattice(3, 6, 1.0, 1.0, 1.0);
        CHECK(energy(StarState::zero(p), p) == 0.0);
    }
    SUBCASE("displaced center: three couplings plus center mass term") {
        for (const double m : {0.0, 2.0}) {
            const LatticeParams p = make_lattice(3, 6, 1.0, m, 1.0);
            StarState s = StarState::zero(p);
            s.u() = 1.0;
            CHECK(energy(s, p) == doctest::Approx(1.5 + 0.5 * m * m).epsilon(1e-14));
        }
    }
    SUBCASE("displaced first site: neighbor + mass + coupling") {
        const LatticeParams p = make_lattice(3, 6, 1.0, 1.0, 1.0);
        StarState s = StarState::zero(p);
        s.phi(0, 1) = 1.0;
        CHECK(energy(s, p) == doctest::Approx(1.5).epsilon(1e-14));
    }
}

TEST_CASE("energy positivity") {
    const LatticeParams p = make_lattice(4, 12, 0.8, 1.3, 2.0);
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) CHECK(energy(random_state(p, rng), p) > 0.0);
    StarState tiny = StarState::zero(p);
    tiny.phi(2, 5) = 1e-8;
    CHECK(energy(tiny, p) > 0.0);
}

TEST_CASE("quadratic form: two rays with unit center mass form a uniform chain") {
    const int L = 7;
    for (const double m : {0.0, 0.9}) {
        const LatticeParams p = make_lattice(2, L, 1.0, m, 1.0);
        const Eigen::MatrixXd h = build_quadratic_form(p);

        // Path order: ray 0 reversed, center, ray 1.
        std::vector<int> path(2 * L + 1);
        for (int n = 1; n <= L; ++n) path[L - n] = 1 + 0 * L + (n - 1);
        path[L] = 0;
        for (int n = 1; n <= L; ++n) path[L + n] = 1 + 1 * L + (n - 1);

        const double diag = 2.0 + m * m;
        for (int i = 0; i <= 2 * L; ++i)
            for (int j = 0; j <= 2 * L; ++j) {
                const double expected =
                    i == j ? diag : (std::abs(i - j) == 1 ? -1.0 : 0.0);
                CHECK(h(path[i], path[j]) == doctest::Approx(expected).epsilon(1e-14));
            }
    }
}

TEST_CASE("quadratic form symmetry and spectral bounds") {
    for (const double m_ctr : {0.5, 1.0, 2.5}) {
        const LatticeParams p = make_lattice(3, 10, 0.9, 1.1, m_ctr);
        const Eigen::MatrixXd h = build_quadratic_form(p);
        CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);

        const Eigen::VectorXd ev =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(h).eigenvalues();
        const double m2 = p.mass * p.mass;
        // Spring terms are positive semidefinite, so eigenvalues are at least
        // m^2 / max(1, M); for M <= 1 that floor is m^2 itself.
        const double floor = m2 / std::max(1.0, m_ctr);
        CHECK(ev.minCoeff() >= floor - 1e-12);
        if (m_ctr <= 1.0) CHECK(ev.minCoeff() >= m2 - 1e-12);
    }
}

TEST_CASE("acceleration is linear and matches the quadratic form") {
    const LatticeParams p = make_lattice(4, 9, 0.7, 0.8, 1.6);
    std::mt19937_64 rng(7);
    const StarState s1 = random_state(p, rng);
    const StarState s2 = random_state(p, rng);

    StarState mix = StarState::zero(p);
    const double al = 0.83, be = -1.47;
    for (int i = 0; i < p.dof(); ++i) mix.pos[i] = al * s1.pos[i] + be * s2.pos[i];

    const Accel a1 = acceleration(s1, p), a2 = acceleration(s2, p),
                am = acceleration(mix, p);
    for (int i = 0; i < p.dof(); ++i)
        CHECK(am.a[i] == doctest::Approx(al * a1.a[i] + be * a2.a[i]).epsilon(1e-12));

    const Eigen::MatrixXd h = build_quadratic_form(p);
    const Eigen::VectorXd sq = mass_diagonal(p).cwiseSqrt();
    Eigen::Map<const Eigen::VectorXd> x(s1.pos.data(), p.dof());
    const Eigen::VectorXd ref = -(h * sq.cwiseProduct(x)).cwiseQuotient(sq);
    for (int i = 0; i < p.dof(); ++i)
        CHECK(a1.a[i] == doctest::Approx(ref[i]).epsilon(1e-12));

    const Eigen::MatrixXd k = build_stiffness(p);
    const Eigen::VectorXd ref2 =
        -(k * x).cwiseQuotient(mass_diagonal(p));
    for (int i = 0; i < p.dof(); ++i)
        CHECK(a1.a[i] == doctest::Approx(ref2[i]).epsilon(1e-12));
}

TEST_CASE("group velocity is the derivative of the dispersion") {
    const LatticeParams p = make_lattice(3, 10, 0.6, 0.7, 1.0);
    const double k = 1.1, h = 1e-6;
    const double fd = (dispersion(k + h, p) - dispersion(k - h, p)) / (2.0 * h);
    CHECK(group_velocity(k, p) == doctest::Approx(fd).epsilon(1e-8));
}
