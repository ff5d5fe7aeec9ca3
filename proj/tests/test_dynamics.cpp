#include <gtest/gtest.h>

#include <random>

#include "csign/dynamics.hpp"
#include "oracles.hpp"

using namespace csign;

namespace {

std::vector<oracle::Tuple> tuples(const StateSpace& space) {
    std::vector<oracle::Tuple> out;
    for (const auto& s : space.states()) {
        out.push_back({s.photons[0], s.photons[1], s.photons[2], s.photons[3], static_cast<int>(s.atoms[0]),
                       static_cast<int>(s.atoms[1])});
    }
    return out;
}

PhysParams params(double g, double omega_c, double delta) {
    PhysParams p;
    p.g = g;
    p.omega_c = omega_c;
    p.delta = delta;
    return p;
}

Eigen::Index idx(const StateSpace& space, const BasisState& s) { return static_cast<Eigen::Index>(*space.index_of(s)); }

}  // namespace

TEST(Rabi, Frequencies) {
    EXPECT_DOUBLE_EQ(rabi_frequency(0, params(1.0, 1.0, 0.0)), 2.0);
    EXPECT_DOUBLE_EQ(rabi_frequency(1, params(1.0, 1.0, 0.0)), 2.0 * std::sqrt(2.0));
    EXPECT_DOUBLE_EQ(rabi_frequency(0, params(2.0, 1.0, 3.0)), 5.0);
}

TEST(Params, Validation) {
    EXPECT_THROW(params(0.0, 1.0, 0.0).validate(), ValidationError);
    EXPECT_THROW(params(1.0, -1.0, 0.0).validate(), ValidationError);
    EXPECT_THROW(params(1.0, 1.0, std::nan("")).validate(), ValidationError);
    const auto p = PhysParams::from_ratios(2.0);
    EXPECT_DOUBLE_EQ(p.delta, 0.2);
    EXPECT_DOUBLE_EQ(p.omega_a(), p.omega_c + p.delta);
    EXPECT_NEAR(p.omega_c, 0.1 * 5.11 / 3.41 * 1e6, 1e-6);
}

TEST(Eigensystem, ResonantBlocks) {
    const auto p = params(0.7, 3.0, 0.0);
    const auto b0 = jc_block_eigensystem(0, p);
    EXPECT_NEAR(b0.eps_plus, 1.5 + 0.7, 1e-12);
    EXPECT_NEAR(b0.eps_minus, 1.5 - 0.7, 1e-12);
    EXPECT_NEAR(b0.theta, kPi / 4, 1e-12);
    const auto b1 = jc_block_eigensystem(1, p);
    EXPECT_NEAR(b1.eps_plus, 4.5 + std::sqrt(2.0) * 0.7, 1e-12);
    EXPECT_NEAR(b1.eps_minus, 4.5 - std::sqrt(2.0) * 0.7, 1e-12);
    EXPECT_NEAR(ground_energy(p), -1.5, 1e-15);
}

TEST(Eigensystem, MatchesExplicitTwoByTwo) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int k = 0; k < 200; ++k) {
        const auto p = params(0.1 + std::abs(u(rng)), 1.0 + std::abs(u(rng)), u(rng));
        for (int n = 0; n <= 2; ++n) {
            // H = w_c a^+a + w_a sz/2 + g (a s^+ + a^+ s) on {|g,n+1>, |e,n>}
            const double hgg = p.omega_c * (n + 1) - p.omega_a() / 2;
            const double hee = p.omega_c * n + p.omega_a() / 2;
            const double off = std::sqrt(n + 1.0) * p.g;
            const auto ev = oracle::eig2(hgg, off, hee);
            const auto ds = jc_block_eigensystem(n, p);
            EXPECT_NEAR(ds.eps_minus, ev[0], 1e-12);
            EXPECT_NEAR(ds.eps_plus, ev[1], 1e-12);
            EXPECT_GT(ds.theta, 0.0);
            EXPECT_LT(ds.theta, kPi / 2);
            EXPECT_NEAR(ds.plus.dot(ds.minus), 0.0, 1e-12);
            EXPECT_NEAR(ds.plus.norm(), 1.0, 1e-12);
            EXPECT_NEAR(ds.minus.norm(), 1.0, 1e-12);
            const Eigen::Matrix2d m = jc_block_matrix(n, p);
            EXPECT_LE((m * ds.plus - ds.eps_plus * ds.plus).norm(), 1e-12);
            EXPECT_LE((m * ds.minus - ds.eps_minus * ds.minus).norm(), 1e-12);
            EXPECT_NEAR(std::tan(ds.theta) * (rabi_frequency(n, p) - p.delta), 2.0 * std::sqrt(n + 1.0) * p.g,
                        1e-9 * (1.0 + std::abs(rabi_frequency(n, p) - p.delta)));
        }
    }
}

TEST(AnalyticEvolve, IdentityAtZero) {
    const auto p = PhysParams::from_ratios(0.4);
    const auto a = analytic_evolve(0.6, Complex{0.0, 0.8}, 0.0, 0.0, p);
    EXPECT_NEAR(std::abs(a.g0 - 0.6), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.g1 - Complex{0.0, 0.8}), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a.e0), 0.0, 1e-15);
}

TEST(AnalyticEvolve, ResonantSinglePhotonFlipsSign) {
    const auto p = PhysParams::from_ratios(0.0);
    const auto a = analytic_evolve(0.0, 1.0, 0.0, kPi / p.g, p);
    EXPECT_NEAR(std::abs(a.g1 + 1.0), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(a.e0), 0.0, 1e-12);
}

TEST(AnalyticEvolve, TwoPhotonMatchesRk4Integration) {
    // n = 1 block, interaction picture: remove (n + 1/2) w_c from both levels.
    const auto p = params(0.1, 50.0, 0.0);
    const double t = 23.4;
    oracle::Matrix h(2, 2);
    const double hgg = p.omega_c * 2 - p.omega_a() / 2;
    const double hee = p.omega_c * 1 + p.omega_a() / 2;
    h << hgg, std::sqrt(2.0) * p.g, std::sqrt(2.0) * p.g, hee;
    h -= 1.5 * p.omega_c * oracle::Matrix::Identity(2, 2);
    Eigen::VectorXcd psi(2);
    psi << 1.0, 0.0;
    psi = oracle::rk4_schrodinger(h, psi, t, 20000);
    const auto a = analytic_evolve(0.0, 0.0, 1.0, t, p);
    EXPECT_NEAR(std::abs(a.g2 - psi(0)), 0.0, 1e-9);
    EXPECT_NEAR(std::abs(a.e1 - psi(1)), 0.0, 1e-9);
}

TEST(AnalyticEvolve, DetunedMatchesRk4Integration) {
    const auto p = params(0.1, 20.0, 0.37);
    const double t = 31.0;
    for (int n : {0, 1}) {
        oracle::Matrix h(2, 2);
        h << p.omega_c * (n + 1) - p.omega_a() / 2, std::sqrt(n + 1.0) * p.g, std::sqrt(n + 1.0) * p.g,
            p.omega_c * n + p.omega_a() / 2;
        h -= (n + 0.5) * p.omega_c * oracle::Matrix::Identity(2, 2);
        Eigen::VectorXcd psi(2);
        psi << 1.0, 0.0;
        psi = oracle::rk4_schrodinger(h, psi, t, 20000);
        const auto a = n == 0 ? analytic_evolve(0.0, 1.0, 0.0, t, p) : analytic_evolve(0.0, 0.0, 1.0, t, p);
        EXPECT_NEAR(std::abs((n == 0 ? a.g1 : a.g2) - psi(0)), 0.0, 1e-9);
        EXPECT_NEAR(std::abs((n == 0 ? a.e0 : a.e1) - psi(1)), 0.0, 1e-9);
    }
    // ground state: energy -w_c/2 - delta/2, frame removes -w_c/2
    const auto vac = analytic_evolve(1.0, 0.0, 0.0, t, p);
    EXPECT_NEAR(std::abs(vac.g0 - std::exp(Complex{0.0, p.delta * t / 2})), 0.0, 1e-12);
}

TEST(AnalyticEvolve, PreservesNorm) {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> n(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 5000.0);
    for (int k = 0; k < 500; ++k) {
        Complex a0{n(rng), n(rng)}, a1{n(rng), n(rng)}, a2{n(rng), n(rng)};
        const double norm = std::sqrt(std::norm(a0) + std::norm(a1) + std::norm(a2));
        const auto p = PhysParams::from_ratios(n(rng) * 3.0);
        const auto out = analytic_evolve(a0 / norm, a1 / norm, a2 / norm, u(rng), p);
        EXPECT_NEAR(out.norm(), 1.0, 1e-12);
    }
}

TEST(Hamiltonian, NumberTermOnIdleSeed) {
    const auto& space = array_space();
    const auto p = PhysParams::from_ratios(0.0);
    const Matrix h = build_array_hamiltonian(space, p, Frame::lab);
    const auto i = idx(space, BasisState::make(0, 1, 0, 1));
    EXPECT_NEAR(h(i, i).real(), 2.0 * p.omega_c, 1e-9);
}

TEST(Hamiltonian, CouplingElement) {
    const auto& space = single_cavity_space();
    const auto p = PhysParams::from_ratios(0.0);
    const Matrix h = build_array_hamiltonian(space, p);
    const auto e0 = idx(space, BasisState::make(0, 0, 0, 0, Level::e));
    const auto g1 = idx(space, BasisState::make(1, 0, 0, 0));
    EXPECT_DOUBLE_EQ(h(e0, g1).real(), p.g);
    const auto e1 = idx(space, BasisState::make(1, 0, 0, 0, Level::e));
    const auto g2 = idx(space, BasisState::make(2, 0, 0, 0));
    EXPECT_NEAR(h(e1, g2).real(), std::sqrt(2.0) * p.g, 1e-15);
}

TEST(Hamiltonian, EqualsTermByTermAssembly) {
    const auto& space = array_space();
    const auto states = tuples(space);
    for (double d : {0.0, 1.7, -4.8}) {
        const auto p = PhysParams::from_ratios(d, 0.1, 30.0);
        const Matrix lab = build_array_hamiltonian(space, p, Frame::lab);
        EXPECT_LE((lab - oracle::hamiltonian(states, p.g, p.omega_c, p.omega_a())).cwiseAbs().maxCoeff(), 1e-12);
        // rotating frame drops w_c from every excitation
        const Matrix rot = build_array_hamiltonian(space, p, Frame::rotating);
        EXPECT_LE((rot - oracle::hamiltonian(states, p.g, 0.0, p.delta)).cwiseAbs().maxCoeff(), 1e-12);
    }
}

TEST(Hamiltonian, HermitianAndConservesExcitation) {
    const auto& space = array_space();
    const Matrix n = total_excitation_matrix(space);
    for (double d : {0.0, 0.3, 4.8}) {
        for (auto frame : {Frame::lab, Frame::rotating}) {
            const Matrix h = build_array_hamiltonian(space, PhysParams::from_ratios(d), frame);
            EXPECT_EQ(hermiticity_defect(h), 0.0);
            EXPECT_LE((h * n - n * h).norm(), 1e-12 * std::max(1.0, h.norm()));
        }
    }
}

TEST(Hamiltonian, SingleCavityBlocksDecouple) {
    const auto& space = single_cavity_space();
    const Matrix h = build_array_hamiltonian(space, PhysParams::from_ratios(1.1), Frame::lab);
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        for (std::size_t j = 0; j < space.dimension(); ++j) {
            if (space.state(i).total_excitation() != space.state(j).total_excitation()) {
                EXPECT_EQ(h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)), Complex(0.0, 0.0));
            }
        }
    }
}
