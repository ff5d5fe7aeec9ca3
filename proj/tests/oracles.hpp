#pragma once

// Independent reference implementations used only by the tests. None of them
// call into the library code they check.

#include <array>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// (x1, x2, y1, y2, a1, a2) with atoms as 0 = g, 1 = e.
using Tuple = std::array<int, 6>;

/// Staged breadth-first closure over every occupation tuple with total
/// excitation <= 2: seeds -> BS image -> cavity-stage fixpoint -> BS image.
std::vector<Tuple> array_closure();

/// All tuples with total excitation <= 2 and at most one excited atom.
std::vector<Tuple> all_tuples();

/// Beamsplitter amplitudes <k, l| BS |n, m> from expanding
/// ((a + b)/sqrt2)^n ((a - b)/sqrt2)^m.
std::map<std::pair<int, int>, double> beamsplitter_column(int n, int m);

/// Reduced photonic matrix by explicit index summation over atom labels.
/// `states` lists the tuple of each row of rho; the result is indexed by the
/// sorted distinct photonic occupations.
Matrix partial_trace(const Matrix& rho, const std::vector<Tuple>& states);

/// Lab-frame H = w_c sum a^+a + w_a sum s^+s + g (s1^+ x1 + s2^+ y1 + h.c.)
/// assembled from per-term matrix elements on the given basis.
Matrix hamiltonian(const std::vector<Tuple>& states, double g, double omega_c, double omega_a);

/// Eigenvalues (ascending) of the real symmetric 2x2 [[a, b], [b, d]].
std::array<double, 2> eig2(double a, double b, double d);

/// Classical RK4 for i d psi/dt = H psi.
Eigen::VectorXcd rk4_schrodinger(const Matrix& h, Eigen::VectorXcd psi, double t, std::size_t steps);

/// Exact rational arithmetic on small integers.
struct Fraction {
    std::int64_t num = 0;
    std::int64_t den = 1;
    Fraction(std::int64_t n = 0, std::int64_t d = 1);
    Fraction operator+(const Fraction& o) const;
    Fraction operator-(const Fraction& o) const;
    Fraction operator*(const Fraction& o) const;
    Fraction operator/(const Fraction& o) const;
    bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
};

}  // namespace oracle
