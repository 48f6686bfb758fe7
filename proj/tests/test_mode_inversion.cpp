#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "starwave/mode_inversion.hpp"

using namespace starwave;

namespace {

StarState random_state(const LatticeParams& p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    StarState s = StarState::zero(p);
    s.u() = dist(rng);
    s.u_dot() = dist(rng);
    for (int r = 0; r < p.n_rays; ++r)
        for (int n = 1; n <= p.ray_len; ++n) {
            s.phi(r, n) = dist(rng);
            s.phi_dot(r, n) = dist(rng);
        }
    return s;
}

}  // namespace

TEST_CASE("grid sampling validates its preconditions") {
    const LatticeParams bad_mass = make_lattice(3, 8, 1.0, 0.0, 2.0);
    CHECK_THROWS_WITH_AS(ModeGrid::sample(StarState::zero(bad_mass), bad_mass, 16),
                         doctest::Contains("center_mass"), std::invalid_argument);
    const LatticeParams bad_delta = make_lattice(3, 8, 0.5, 0.0, 1.0);
    CHECK_THROWS_WITH_AS(ModeGrid::sample(StarState::zero(bad_delta), bad_delta, 16),
                         doctest::Contains("delta"), std::invalid_argument);
    const LatticeParams p = make_lattice(3, 8, 1.0, 0.0, 1.0);
    CHECK_THROWS_WITH_AS(ModeGrid::sample(StarState::zero(p), p, 9),
                         doctest::Contains("coarse"), std::invalid_argument);
    const ModeGrid g = ModeGrid::sample(StarState::zero(p), p, 10);
    CHECK(g.size == 10);
    CHECK(g.nodes.front() > 0.0);
    CHECK(g.nodes.back() < 3.141592653589794);
}

TEST_CASE("cyclic differences: single displaced site") {
    const LatticeParams p = make_lattice(3, 8, 1.0, 0.0, 1.0);
    StarState s = StarState::zero(p);
    s.phi(1, 2) = 1.0;  // second ray, second site
    const ModeGrid g = ModeGrid::sample(s, p, 12);
    const std::vector<double> dq = delta_q(g);
    for (int r = 0; r < 3; ++r)
        for (int n = 1; n <= 8; ++n) {
            const double expected = (n == 2) ? (r == 0 ? 1.0 : (r == 1 ? -1.0 : 0.0)) : 0.0;
            CHECK(dq[r * 8 + (n - 1)] ==
                  doctest::Approx(expected).scale(1.0).epsilon(1e-12));
        }
}

TEST_CASE("cyclic differences vanish for equal rays and for N = 2") {
    const LatticeParams p = make_lattice(4, 6, 1.0, 0.0, 1.0);
    StarState s = StarState::zero(p);
    for (int r = 0; r < 4; ++r)
        for (int n = 1; n <= 6; ++n) s.phi(r, n) = 0.3 * n - 0.1;
    const ModeGrid g = ModeGrid::sample(s, p, 16);
    for (const double v : delta_q(g)) CHECK(std::abs(v) < 1e-12);

    const LatticeParams p2 = make_lattice(2, 6, 1.0, 0.0, 1.0);
    const ModeGrid g2 = ModeGrid::sample(StarState::zero(p2), p2, 16);
    CHECK_THROWS_AS(delta_q(g2), std::invalid_argument);
    CHECK_THROWS_AS(q_from_eta_kernel(g2), std::invalid_argument);
}

TEST_CASE("differences recovered by quadrature match the direct ones") {
    const LatticeParams p = make_lattice(5, 12, 1.0, 0.0, 1.0);
    std::mt19937_64 rng(21);
    const StarState s = random_state(p, rng);
    const ModeGrid g = ModeGrid::sample(s, p, p.ray_len + 2);
    const ChainSums cs = chain_sums_from_state(s);
    const ChainSums cs_dot = chain_sums_from_state(s, true);
    const std::vector<double> dq = delta_q(g);
    const std::vector<double> dq_dot = delta_q(g, true);
    for (size_t i = 0; i < dq.size(); ++i) {
        CHECK(dq[i] == doctest::Approx(cs.dq[i]).scale(1.0).epsilon(1e-10));
        CHECK(dq_dot[i] == doctest::Approx(cs_dot.dq[i]).scale(1.0).epsilon(1e-10));
    }
}

TEST_CASE("eta coefficients: displaced center and direct-sum oracle") {
    const LatticeParams p = make_lattice(3, 8, 1.0, 0.0, 1.0);
    StarState s = StarState::zero(p);
    s.u() = 1.0;
    const ModeGrid g = ModeGrid::sample(s, p, 20);
    const std::vector<double> eta = eta_coeffs(g);
    CHECK(eta[0] == doctest::Approx(3.0).epsilon(1e-12));
    for (size_t n = 1; n < eta.size(); ++n)
        CHECK(eta[n] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));

    std::mt19937_64 rng(22);
    const StarState rnd = random_state(p, rng);
    const ModeGrid g2 = ModeGrid::sample(rnd, p, 32);
    const std::vector<double> eta2 = eta_coeffs(g2);
    const std::vector<double> eta2_dot = eta_coeffs(g2, true);
    const ChainSums cs = chain_sums_from_state(rnd);
    const ChainSums cs_dot = chain_sums_from_state(rnd, true);
    for (size_t n = 0; n < eta2.size(); ++n) {
        CHECK(eta2[n] == doctest::Approx(cs.eta[n]).scale(1.0).epsilon(1e-10));
        CHECK(eta2_dot[n] == doctest::Approx(cs_dot.eta[n]).scale(1.0).epsilon(1e-10));
    }
}

TEST_CASE("direct chain sums satisfy their defining relations") {
    const LatticeParams p = make_lattice(4, 10, 1.0, 0.0, 1.0);
    std::mt19937_64 rng(23);
    const StarState s = random_state(p, rng);
    const ChainSums cs = chain_sums_from_state(s);
    CHECK(cs.q[0] == doctest::Approx(4.0 * s.u()).epsilon(1e-14));
    for (int n = 0; n <= 10; ++n) {
        const double next = (n + 1 <= 10) ? cs.q[n + 1] : 0.0;
        CHECK(cs.eta[n] == doctest::Approx(cs.q[n] + 3.0 * next).epsilon(1e-13));
    }
    for (int n = 1; n <= 10; ++n) {
        double cyc = 0.0;
        for (int r = 0; r < 4; ++r) cyc += cs.dq[r * 10 + (n - 1)];
        CHECK(cyc == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    }
}

TEST_CASE("triangular back-substitution hand values") {
    SUBCASE("worked three-ray example") {
        const std::vector<double> eta{1.0, 2.0, 3.0};
        const std::vector<double> q = q_from_eta_triangular(eta, 3);
        CHECK(q[0] == doctest::Approx(9.0));
        CHECK(q[1] == doctest::Approx(-4.0));
        CHECK(q[2] == doctest::Approx(3.0));
        // u = Q_0 / N
        CHECK(q[0] / 3.0 == doctest::Approx(3.0));
    }
    SUBCASE("unit vector produces the inverse-matrix column") {
        const std::vector<double> eta{0.0, 0.0, 1.0, 0.0, 0.0};
        const std::vector<double> q = q_from_eta_triangular(eta, 3);
        CHECK(q[0] == doctest::Approx(4.0));   // (1-N)^2
        CHECK(q[1] == doctest::Approx(-2.0));  // (1-N)^1
        CHECK(q[2] == doctest::Approx(1.0));
        CHECK(q[3] == 0.0);
        CHECK(q[4] == 0.0);
    }
    SUBCASE("zero input") {
        const std::vector<double> q = q_from_eta_triangular(std::vector<double>(6, 0.0), 5);
        for (const double v : q) CHECK(v == 0.0);
    }
}

TEST_CASE("closed-form kernel: zero input and the bounded-solution bias") {
    const LatticeParams p = make_lattice(3, 8, 1.0, 0.0, 1.0);
    const ModeGrid zero = ModeGrid::sample(StarState::zero(p), p, 32);
    const KernelReport zrep = q_from_eta_kernel(zero);
    CHECK(zrep.max_abs_dev == 0.0);
    for (const double v : zrep.q_kernel) CHECK(v == 0.0);

    // Denominator floor (N-2)^2 > 0 for N >= 3.
    for (int n = 3; n <= 6; ++n)
        CHECK(n * n - 4.0 * (n - 1.0) >= (n - 2.0) * (n - 2.0) - 1e-12);

    // For a displaced center the quadrature against the closed-form kernel
    // returns the bounded solution of the recurrence, not the truncated one:
    // Q_kernel_0 = Q_0/(N-1) and Q_kernel_n = -(Q_0/2) (-1/2)^n for N = 3.
    StarState s = StarState::zero(p);
    s.u() = 1.0;
    const ModeGrid g = ModeGrid::sample(s, p, 32);
    const KernelReport rep = q_from_eta_kernel(g);
    CHECK(rep.q_triangular[0] == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rep.q_kernel[0] == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(rep.q_kernel[1] == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(rep.q_kernel[2] == doctest::Approx(-0.375).epsilon(1e-10));
    CHECK(rep.max_abs_dev == doctest::Approx(1.5).epsilon(1e-10));
}

TEST_CASE("reconstruction from sums and differences") {
    SUBCASE("zero differences spread the sums evenly") {
        const std::vector<double> q{6.0, 3.0, -9.0};
        const std::vector<double> dq(3 * 2, 0.0);
        const ReconstructedField f = reconstruct_state(q, dq, 3, 2);
        CHECK(f.center == doctest::Approx(2.0));
        for (int r = 0; r < 3; ++r) {
            CHECK(f.rays[r * 2 + 0] == doctest::Approx(1.0));
            CHECK(f.rays[r * 2 + 1] == doctest::Approx(-3.0));
        }
    }
    SUBCASE("single-ray excitation a") {
        const double a = 1.7;
        // N = 3, L = 1: phi^{(1)} = a, others zero.
        const std::vector<double> q{0.0, a};
        const std::vector<double> dq{-a, 0.0, a};
        const ReconstructedField f = reconstruct_state(q, dq, 3, 1);
        CHECK(f.rays[0] == doctest::Approx(a));
        CHECK(f.rays[1] == doctest::Approx(0.0).scale(1.0));
        CHECK(f.rays[2] == doctest::Approx(0.0).scale(1.0));
    }
    SUBCASE("inconsistent cyclic differences are rejected") {
        const std::vector<double> q{0.0, 1.0};
        const std::vector<double> dq{1.0, 1.0, 1.0};
        CHECK_THROWS_WITH_AS(reconstruct_state(q, dq, 3, 1),
                             doctest::Contains("inconsistent"), std::invalid_argument);
    }
    SUBCASE("composition with direct sums is the identity") {
        const LatticeParams p = make_lattice(5, 9, 1.0, 0.0, 1.0);
        std::mt19937_64 rng(24);
        const StarState s = random_state(p, rng);
        for (const bool vel : {false, true}) {
            const ChainSums cs = chain_sums_from_state(s, vel);
            const ReconstructedField f = reconstruct_state(cs.q, cs.dq, 5, 9);
            CHECK(f.center ==
                  doctest::Approx(vel ? s.u_dot() : s.u()).scale(1.0).epsilon(1e-12));
            for (int r = 0; r < 5; ++r)
                for (int n = 1; n <= 9; ++n)
                    CHECK(f.rays[r * 9 + (n - 1)] ==
                          doctest::Approx(vel ? s.phi_dot(r, n) : s.phi(r, n))
                              .scale(1.0)
                              .epsilon(1e-12));
        }
    }
}

TEST_CASE("full round trip: exact recovery of displacements and velocities") {
    std::mt19937_64 rng(25);
    SUBCASE("zero state") {
        const LatticeParams p = make_lattice(3, 16, 1.0, 0.0, 1.0);
        CHECK(roundtrip(StarState::zero(p), p, 18) == 0.0);
    }
    SUBCASE("N = 3, L = 32, P = 64") {
        const LatticeParams p = make_lattice(3, 32, 1.0, 0.0, 1.0);
        CHECK(roundtrip(random_state(p, rng), p, 64) < 1e-10);
    }
    SUBCASE("N = 5, L = 16, P = 18") {
        const LatticeParams p = make_lattice(5, 16, 1.0, 0.0, 1.0);
        CHECK(roundtrip(random_state(p, rng), p, 18) < 1e-10);
    }
    SUBCASE("massive field does not enter the transform at unit center mass") {
        const LatticeParams p = make_lattice(4, 12, 1.0, 1.3, 1.0);
        CHECK(roundtrip(random_state(p, rng), p, 14) < 1e-10);
    }
}

TEST_CASE("quadrature is exact: doubling the grid changes nothing") {
    const LatticeParams p = make_lattice(4, 16, 1.0, 0.0, 1.0);
    std::mt19937_64 rng(26);
    const StarState s = random_state(p, rng);
    const ModeGrid g1 = ModeGrid::sample(s, p, 18);
    const ModeGrid g2 = ModeGrid::sample(s, p, 36);

    const std::vector<double> eta1 = eta_coeffs(g1), eta2 = eta_coeffs(g2);
    for (size_t n = 0; n < eta1.size(); ++n)
        CHECK(std::abs(eta1[n] - eta2[n]) < 1e-12);

    const std::vector<double> dq1 = delta_q(g1), dq2 = delta_q(g2);
    for (size_t i = 0; i < dq1.size(); ++i) CHECK(std::abs(dq1[i] - dq2[i]) < 1e-12);
}

TEST_CASE("mode sum expansion holds pointwise on the grid") {
    const LatticeParams p = make_lattice(3, 12, 1.0, 0.0, 1.0);
    std::mt19937_64 rng(27);
    const StarState s = random_state(p, rng);
    const ModeGrid g = ModeGrid::sample(s, p, 14);
    const ChainSums cs = chain_sums_from_state(s);
    for (int pnode = 0; pnode < g.size; ++pnode) {
        const double k = g.nodes[pnode];
        double sum = 0.0;
        for (int r = 0; r < 3; ++r) sum += g.xi[pnode * 3 + r];
        double expansion = 0.0;
        for (int n = 0; n <= 12; ++n) expansion += cs.eta[n] * std::cos(k * (n + 0.5));
        CHECK(sum == doctest::Approx(expansion).scale(1.0).epsilon(1e-10));
    }
}
