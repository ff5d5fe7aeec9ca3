#pragma once

// Occupation-number basis for the four-rail, two-atom C-Sign array.
//
// Rails x1/y1 run through the two cavities (atoms a1/a2), x2/y2 are idle.
// The reachable basis is built by closing the dual-rail inputs under the
// gate stages in the order they fire, so the matrix dimension follows from
// the physics rather than a hard-coded list.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "csign/types.hpp"

namespace csign {

enum class Rail : std::uint8_t { x1 = 0, x2 = 1, y1 = 2, y2 = 3 };
enum class Atom : std::uint8_t { a1 = 0, a2 = 1 };
enum class Level : std::uint8_t { g = 0, e = 1 };

inline constexpr std::array<Rail, 4> kAllRails{Rail::x1, Rail::x2, Rail::y1, Rail::y2};
inline constexpr std::array<Atom, 2> kAllAtoms{Atom::a1, Atom::a2};

std::string to_string(Rail rail);
std::string to_string(Atom atom);

/// Photon numbers on (x1, x2, y1, y2).
using Occupation = std::array<std::uint8_t, 4>;

/// One configuration of the closed system: photon numbers on four rails and
/// the level of each atom. Ordering is lexicographic on (x1,x2,y1,y2,a1,a2).
struct BasisState {
    Occupation photons{};
    std::array<Level, 2> atoms{Level::g, Level::g};

    static BasisState make(int x1, int x2, int y1, int y2, Level a1 = Level::g,
                           Level a2 = Level::g);

    int photons_on(Rail rail) const { return photons[static_cast<std::size_t>(rail)]; }
    Level level(Atom atom) const { return atoms[static_cast<std::size_t>(atom)]; }
    int photon_count() const;
    int atom_excitations() const;
    int total_excitation() const { return photon_count() + atom_excitations(); }

    /// "|x1 x2 y1 y2;a1a2>", e.g. "|1001;gg>".
    std::string label() const;

    auto operator<=>(const BasisState&) const = default;
};

/// Array invariants: excitation <= max, idle rails hold at most one photon,
/// never both atoms excited.
bool satisfies_array_invariants(const BasisState& s, int max_total_excitation = 2);

/// Elementary connectivity used to grow the reachable basis.
struct Generator {
    enum class Kind { beamsplitter, jc_exchange, leak, atom_decay };

    Kind kind;
    Rail rail = Rail::x1;
    Rail partner = Rail::y1;  // beamsplitter second port
    Atom atom = Atom::a1;     // jc_exchange / atom_decay

    static Generator beamsplitter(Rail a, Rail b) { return {Kind::beamsplitter, a, b, Atom::a1}; }
    static Generator jc_exchange(Atom atom, Rail rail) { return {Kind::jc_exchange, rail, rail, atom}; }
    static Generator leak(Rail rail) { return {Kind::leak, rail, rail, Atom::a1}; }
    static Generator atom_decay(Atom atom) { return {Kind::atom_decay, Rail::x1, Rail::x1, atom}; }

    /// States reached from `s` with non-zero amplitude.
    std::vector<BasisState> image(const BasisState& s) const;
};

/// A gate stage. A discrete stage is an instantaneous unitary (its input set
/// is replaced by the image); a continuous stage is a time evolution whose
/// reachable set is the fixpoint of its generators, inputs included.
struct Stage {
    std::vector<Generator> generators;
    bool continuous = false;
};

class StateSpace {
public:
    StateSpace() = default;
    /// Sorts and deduplicates.
    explicit StateSpace(std::vector<BasisState> states);

    std::size_t dimension() const { return states_.size(); }
    const BasisState& state(std::size_t i) const { return states_.at(i); }
    std::span<const BasisState> states() const { return states_; }
    std::optional<std::size_t> index_of(const BasisState& s) const;
    bool contains(const BasisState& s) const { return index_.count(s) != 0; }

    /// Ordered list of [x1, x2, y1, y2, a1, a2] tuples, atoms as "g"/"e".
    std::string to_json() const;

private:
    std::vector<BasisState> states_;
    std::map<BasisState, std::size_t> index_;
};

/// Result of the staged closure, keeping the per-stage reachable sets.
struct ClosureResult {
    StateSpace space;
    std::vector<std::vector<BasisState>> stage_sets;  // [0] = seeds
};

/// Closes `seeds` under `stages` applied in order; the space is the union of
/// every stage's reachable set. States above `max_total_excitation` are
/// discarded (no generator raises excitation, so none appear in practice).
ClosureResult enumerate_states(std::span<const BasisState> seeds, std::span<const Stage> stages,
                               int max_total_excitation = 2);

/// The four dual-rail computational states, atoms in g.
std::vector<BasisState> computational_seeds();

/// BS1 -> cavity evolution (exchange, leak, atom decay) -> BS2.
std::vector<Stage> array_stages();

/// Cached closure of the computational seeds under array_stages().
const ClosureResult& array_closure();
const StateSpace& array_space();

/// {|g,0>,|g,1>,|g,2>,|e,0>,|e,1>} on rail x1 with atom a1.
const StateSpace& single_cavity_space();

/// Fock expansion of |n,m> through a 50/50 beamsplitter:
/// a1+ -> (a1+ + a2+)/sqrt2, a2+ -> (a1+ - a2+)/sqrt2.
struct FockAmplitude {
    int first;
    int second;
    double amplitude;
};
std::vector<FockAmplitude> beamsplitter_expansion(int n, int m);

Matrix annihilation_matrix(Rail rail, const StateSpace& space);
Matrix creation_matrix(Rail rail, const StateSpace& space);
Matrix number_matrix(Rail rail, const StateSpace& space);
Matrix atom_lowering_matrix(Atom atom, const StateSpace& space);
Matrix atom_raising_matrix(Atom atom, const StateSpace& space);
Matrix total_excitation_matrix(const StateSpace& space);

class PureState {
public:
    /// Requires unit norm within 1e-12.
    explicit PureState(Vector amplitudes);
    static PureState basis(const StateSpace& space, const BasisState& s);

    const Vector& amplitudes() const { return amplitudes_; }
    std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
    Matrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

private:
    Vector amplitudes_;
};

class DensityMatrix {
public:
    /// Requires Hermiticity within 1e-12, eigenvalues >= -1e-9 and trace in (0, 1+1e-12].
    explicit DensityMatrix(Matrix rho);
    static DensityMatrix from_pure(const PureState& psi) { return DensityMatrix(psi.projector()); }

    const Matrix& matrix() const { return rho_; }
    std::size_t dimension() const { return static_cast<std::size_t>(rho_.rows()); }
    double trace() const { return rho_.trace().real(); }

private:
    Matrix rho_;
};

/// Logical |qx,qy>: bit 1 puts the photon on rail 1 of the pair, bit 0 on rail 2.
BasisState dual_rail_state(int qx, int qy);
PureState dual_rail_encode(int qx, int qy, const StateSpace& space);

struct PhotonicState {
    std::vector<Occupation> basis;  // lexicographic
    Matrix rho;
};

/// Sums out the atom levels; only atom configurations present on both sides
/// of an element contribute.
PhotonicState partial_trace_atoms(const Matrix& rho, const StateSpace& space);

}  // namespace csign
