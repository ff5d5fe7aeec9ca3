#include "csign/dynamics.hpp"

#include <cmath>
#include <string>

namespace csign {

PhysParams PhysParams::from_ratios(double delta_over_g, double g, double omega_c_over_g) {
    PhysParams p;
    p.g = g;
    p.omega_c = omega_c_over_g * g;
    p.delta = delta_over_g * g;
    return p;
}

void PhysParams::validate() const {
    if (!std::isfinite(g) || !std::isfinite(omega_c) || !std::isfinite(delta)) {
        throw ValidationError("physical parameters must be finite");
    }
    if (g <= 0.0) throw ValidationError("coupling g must be positive, got " + std::to_string(g));
    if (omega_c <= 0.0) throw ValidationError("cavity frequency omega_c must be positive");
}

double rabi_frequency(int n, const PhysParams& p) {
    if (n < 0) throw ValidationError("block index must be non-negative");
    return std::sqrt(p.delta * p.delta + 4.0 * p.g * p.g * (n + 1));
}

Eigen::Matrix2d jc_block_matrix(int n, const PhysParams& p) {
    if (n < 0) throw ValidationError("block index must be non-negative");
    const double c = std::sqrt(static_cast<double>(n + 1)) * p.g;
    Eigen::Matrix2d h;
    h << -p.delta / 2.0, c, c, p.delta / 2.0;
    h += (n + 0.5) * p.omega_c * Eigen::Matrix2d::Identity();
    return h;
}

DressedState jc_block_eigensystem(int n, const PhysParams& p) {
    const double omega = rabi_frequency(n, p);
    DressedState d;
    d.n = n;
    d.theta = std::atan2(2.0 * std::sqrt(static_cast<double>(n + 1)) * p.g, omega - p.delta);
    d.eps_plus = (n + 0.5) * p.omega_c + omega / 2.0;
    d.eps_minus = (n + 0.5) * p.omega_c - omega / 2.0;
    d.plus << std::cos(d.theta), std::sin(d.theta);
    d.minus << -std::sin(d.theta), std::cos(d.theta);
    return d;
}

double ground_energy(const PhysParams& p) { return -0.5 * p.omega_c - 0.5 * p.delta; }

Vector CavityAmplitudes::to_vector() const {
    // single_cavity_space() order: |0000;gg>, |0000;eg>, |1000;gg>, |1000;eg>, |2000;gg>
    Vector v(5);
    v << g0, e0, g1, e1, g2;
    return v;
}

double CavityAmplitudes::norm() const { return to_vector().norm(); }

CavityAmplitudes analytic_evolve(Complex a0, Complex a1, Complex a2, double t, const PhysParams& p) {
    const double sq = std::norm(a0) + std::norm(a1) + std::norm(a2);
    if (std::abs(sq - 1.0) > 1e-12) throw ValidationError("initial amplitudes must be normalized");
    const Complex i{0.0, 1.0};

    const auto block = [&](int n, Complex alpha, Complex& ground, Complex& excited) {
        const DressedState d = jc_block_eigensystem(n, p);
        const double half = rabi_frequency(n, p) * t / 2.0;
        ground = alpha * (std::cos(half) - i * std::cos(2.0 * d.theta) * std::sin(half));
        excited = alpha * (-i * std::sin(2.0 * d.theta) * std::sin(half));
    };

    CavityAmplitudes out;
    out.g0 = a0 * std::exp(i * t * p.delta / 2.0);
    block(0, a1, out.g1, out.e0);
    block(1, a2, out.g2, out.e1);
    return out;
}

Matrix build_array_hamiltonian(const StateSpace& space, const PhysParams& p, Frame frame) {
    p.validate();
    const auto d = static_cast<Eigen::Index>(space.dimension());
    Matrix h = Matrix::Zero(d, d);

    const double photon_energy = frame == Frame::lab ? p.omega_c : 0.0;
    const double atom_energy = frame == Frame::lab ? p.omega_a() : p.delta;

    struct Cavity {
        Atom atom;
        Rail rail;
    };
    constexpr Cavity cavities[] = {{Atom::a1, Rail::x1}, {Atom::a2, Rail::y1}};

    for (Eigen::Index col = 0; col < d; ++col) {
        const BasisState& s = space.state(static_cast<std::size_t>(col));
        h(col, col) = photon_energy * s.photon_count() + atom_energy * s.atom_excitations();

        for (const auto& cav : cavities) {
            const auto ri = static_cast<std::size_t>(cav.rail);
            const auto ai = static_cast<std::size_t>(cav.atom);
            // g (sigma+ a): |g,n> -> sqrt(n) |e,n-1>
            if (s.atoms[ai] == Level::g && s.photons[ri] > 0) {
                BasisState t = s;
                t.photons[ri] -= 1;
                t.atoms[ai] = Level::e;
                if (auto row = space.index_of(t)) {
                    const double c = p.g * std::sqrt(static_cast<double>(s.photons[ri]));
                    const auto r = static_cast<Eigen::Index>(*row);
                    h(r, col) = c;
                    h(col, r) = c;
                }
            }
        }
    }
    return h;
}

}  // namespace csign
