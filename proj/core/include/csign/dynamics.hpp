#pragma once

// Jaynes-Cummings physics: block eigensystem, closed-form single-cavity
// evolution and the full four-rail array Hamiltonian.

#include <complex>

#include "csign/fock.hpp"
#include "csign/types.hpp"

namespace csign {

/// Coupling g (hbar = 1), cavity frequency omega_c and detuning
/// delta = omega_a - omega_c.
struct PhysParams {
    double g = 0.1;
    double omega_c = 0.1 * 5.11 / 3.41 * 1e6;
    double delta = 0.0;

    static constexpr double kDefaultG = 0.1;
    static constexpr double kDefaultOmegaCOverG = 5.11 / 3.41 * 1e6;

    static PhysParams from_ratios(double delta_over_g, double g = kDefaultG,
                                  double omega_c_over_g = kDefaultOmegaCOverG);

    double omega_a() const { return omega_c + delta; }
    /// Throws ValidationError unless g > 0, omega_c > 0 and all values are finite.
    void validate() const;
};

/// Generalized Rabi frequency sqrt(delta^2 + 4 g^2 (n+1)).
double rabi_frequency(int n, const PhysParams& p);

/// 2x2 Hamiltonian on {|g,n+1>, |e,n>}.
Eigen::Matrix2d jc_block_matrix(int n, const PhysParams& p);

/// Eigen-decomposition of the invariant block Lambda_n.
struct DressedState {
    int n = 0;
    double theta = 0.0;  // tan(theta) = 2 sqrt(n+1) g / (Omega_n - delta)
    double eps_plus = 0.0;
    double eps_minus = 0.0;
    Eigen::Vector2d plus;   // cos(theta)|g,n+1> + sin(theta)|e,n>
    Eigen::Vector2d minus;  // -sin(theta)|g,n+1> + cos(theta)|e,n>
};

DressedState jc_block_eigensystem(int n, const PhysParams& p);

/// Energy of |g,0>: -omega_c/2 - delta/2.
double ground_energy(const PhysParams& p);

/// Amplitudes over {|g,0>,|g,1>,|g,2>,|e,0>,|e,1>}.
struct CavityAmplitudes {
    Complex g0, g1, g2, e0, e1;

    /// Vector ordered like single_cavity_space().
    Vector to_vector() const;
    double norm() const;
};

/// Closed-form interaction-picture evolution of a0|g,0> + a1|g,1> + a2|g,2>
/// for duration t. The frame removes (n + 1/2) omega_c from block Lambda_n.
CavityAmplitudes analytic_evolve(Complex a0, Complex a1, Complex a2, double t, const PhysParams& p);

enum class Frame {
    lab,       // literal omega_c, omega_a terms
    rotating,  // omega_c * (photon number + atom excitation) removed
};

/// Number terms on all four rails, atom projectors and the exchange couplings
/// a1 <-> x1, a2 <-> y1. Couplings leaving the space are dropped.
Matrix build_array_hamiltonian(const StateSpace& space, const PhysParams& p, Frame frame = Frame::rotating);

}  // namespace csign
