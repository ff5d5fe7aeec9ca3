#include "csign/fock.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include <json.hpp>

namespace csign {

namespace {

constexpr double kAmplitudeCutoff = 1e-14;

double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

std::vector<BasisState> apply_discrete(const Stage& stage, const std::vector<BasisState>& input) {
    std::set<BasisState> current(input.begin(), input.end());
    for (const auto& gen : stage.generators) {
        std::set<BasisState> next;
        for (const auto& s : current) {
            for (const auto& t : gen.image(s)) next.insert(t);
        }
        current = std::move(next);
    }
    return {current.begin(), current.end()};
}

std::vector<BasisState> apply_continuous(const Stage& stage, const std::vector<BasisState>& input,
                                         int max_total_excitation) {
    std::set<BasisState> seen(input.begin(), input.end());
    std::vector<BasisState> frontier(input.begin(), input.end());
    while (!frontier.empty()) {
        std::vector<BasisState> next;
        for (const auto& s : frontier) {
            for (const auto& gen : stage.generators) {
                for (const auto& t : gen.image(s)) {
                    if (t.total_excitation() > max_total_excitation) continue;
                    if (seen.insert(t).second) next.push_back(t);
                }
            }
        }
        frontier = std::move(next);
    }
    return {seen.begin(), seen.end()};
}

}  // namespace

std::string to_string(Rail rail) {
    switch (rail) {
        case Rail::x1: return "x1";
        case Rail::x2: return "x2";
        case Rail::y1: return "y1";
        case Rail::y2: return "y2";
    }
    return "?";
}

std::string to_string(Atom atom) { return atom == Atom::a1 ? "a1" : "a2"; }

BasisState BasisState::make(int x1, int x2, int y1, int y2, Level a1, Level a2) {
    if (x1 < 0 || x2 < 0 || y1 < 0 || y2 < 0) {
        throw ValidationError("photon numbers must be non-negative");
    }
    BasisState s;
    s.photons = {static_cast<std::uint8_t>(x1), static_cast<std::uint8_t>(x2),
                 static_cast<std::uint8_t>(y1), static_cast<std::uint8_t>(y2)};
    s.atoms = {a1, a2};
    return s;
}

int BasisState::photon_count() const {
    int n = 0;
    for (auto p : photons) n += p;
    return n;
}

int BasisState::atom_excitations() const {
    int n = 0;
    for (auto a : atoms) n += (a == Level::e) ? 1 : 0;
    return n;
}

std::string BasisState::label() const {
    std::ostringstream os;
    os << '|';
    for (auto p : photons) os << static_cast<int>(p);
    os << ';';
    for (auto a : atoms) os << (a == Level::e ? 'e' : 'g');
    os << '>';
    return os.str();
}

bool satisfies_array_invariants(const BasisState& s, int max_total_excitation) {
    return s.total_excitation() <= max_total_excitation && s.photons_on(Rail::x2) <= 1 &&
           s.photons_on(Rail::y2) <= 1 && !(s.level(Atom::a1) == Level::e && s.level(Atom::a2) == Level::e);
}

std::vector<FockAmplitude> beamsplitter_expansion(int n, int m) {
    // (a1+ + a2+)^n (a1+ - a2+)^m / sqrt(n! m! 2^(n+m)) |0,0>
    std::map<std::pair<int, int>, double> acc;
    const double norm = 1.0 / std::sqrt(factorial(n) * factorial(m) * std::pow(2.0, n + m));
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= m; ++j) {
            const int p = i + j;
            const int q = (n - i) + (m - j);
            const double sign = ((m - j) % 2 == 0) ? 1.0 : -1.0;
            const double c = binomial(n, i) * binomial(m, j) * sign * norm * std::sqrt(factorial(p) * factorial(q));
            acc[{p, q}] += c;
        }
    }
    std::vector<FockAmplitude> out;
    for (const auto& [pq, c] : acc) {
        if (std::abs(c) > kAmplitudeCutoff) out.push_back({pq.first, pq.second, c});
    }
    return out;
}

std::vector<BasisState> Generator::image(const BasisState& s) const {
    std::vector<BasisState> out;
    const auto ri = static_cast<std::size_t>(rail);
    const auto ai = static_cast<std::size_t>(atom);
    switch (kind) {
        case Kind::beamsplitter: {
            const auto pi = static_cast<std::size_t>(partner);
            for (const auto& amp : beamsplitter_expansion(s.photons[ri], s.photons[pi])) {
                BasisState t = s;
                t.photons[ri] = static_cast<std::uint8_t>(amp.first);
                t.photons[pi] = static_cast<std::uint8_t>(amp.second);
                out.push_back(t);
            }
            break;
        }
        case Kind::jc_exchange: {
            if (s.atoms[ai] == Level::g && s.photons[ri] > 0) {
                BasisState t = s;
                t.photons[ri] -= 1;
                t.atoms[ai] = Level::e;
                out.push_back(t);
            } else if (s.atoms[ai] == Level::e) {
                BasisState t = s;
                t.photons[ri] += 1;
                t.atoms[ai] = Level::g;
                out.push_back(t);
            }
            break;
        }
        case Kind::leak: {
            if (s.photons[ri] > 0) {
                BasisState t = s;
                t.photons[ri] -= 1;
                out.push_back(t);
            }
            break;
        }
        case Kind::atom_decay: {
            if (s.atoms[ai] == Level::e) {
                BasisState t = s;
                t.atoms[ai] = Level::g;
                out.push_back(t);
            }
            break;
        }
    }
    return out;
}

StateSpace::StateSpace(std::vector<BasisState> states) : states_(std::move(states)) {
    std::sort(states_.begin(), states_.end());
    states_.erase(std::unique(states_.begin(), states_.end()), states_.end());
    for (std::size_t i = 0; i < states_.size(); ++i) index_.emplace(states_[i], i);
}

std::optional<std::size_t> StateSpace::index_of(const BasisState& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::string StateSpace::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& s : states_) {
        j.push_back({s.photons[0], s.photons[1], s.photons[2], s.photons[3],
                     s.atoms[0] == Level::e ? "e" : "g", s.atoms[1] == Level::e ? "e" : "g"});
    }
    return nlohmann::json{{"dimension", states_.size()}, {"states", j}}.dump();
}

ClosureResult enumerate_states(std::span<const BasisState> seeds, std::span<const Stage> stages,
                               int max_total_excitation) {
    ClosureResult result;
    std::vector<BasisState> current;
    for (const auto& s : seeds) {
        if (s.total_excitation() <= max_total_excitation) current.push_back(s);
    }
    std::sort(current.begin(), current.end());
    current.erase(std::unique(current.begin(), current.end()), current.end());
    result.stage_sets.push_back(current);

    std::vector<BasisState> all = current;
    for (const auto& stage : stages) {
        current = stage.continuous ? apply_continuous(stage, current, max_total_excitation)
                                   : apply_discrete(stage, current);
        std::erase_if(current, [&](const BasisState& s) { return s.total_excitation() > max_total_excitation; });
        result.stage_sets.push_back(current);
        all.insert(all.end(), current.begin(), current.end());
    }
    result.space = StateSpace(std::move(all));
    return result;
}

std::vector<BasisState> computational_seeds() {
    return {dual_rail_state(0, 0), dual_rail_state(0, 1), dual_rail_state(1, 0), dual_rail_state(1, 1)};
}

std::vector<Stage> array_stages() {
    Stage bs{{Generator::beamsplitter(Rail::x1, Rail::y1)}, false};
    Stage cavity{{Generator::jc_exchange(Atom::a1, Rail::x1), Generator::jc_exchange(Atom::a2, Rail::y1),
                  Generator::leak(Rail::x1), Generator::leak(Rail::y1), Generator::atom_decay(Atom::a1),
                  Generator::atom_decay(Atom::a2)},
                 true};
    return {bs, cavity, bs};
}

const ClosureResult& array_closure() {
    static const ClosureResult closure = [] {
        const auto seeds = computational_seeds();
        const auto stages = array_stages();
        return enumerate_states(seeds, stages, 2);
    }();
    return closure;
}

const StateSpace& array_space() { return array_closure().space; }

const StateSpace& single_cavity_space() {
    static const StateSpace space({
        BasisState::make(0, 0, 0, 0),
        BasisState::make(1, 0, 0, 0),
        BasisState::make(2, 0, 0, 0),
        BasisState::make(0, 0, 0, 0, Level::e),
        BasisState::make(1, 0, 0, 0, Level::e),
    });
    return space;
}

Matrix annihilation_matrix(Rail rail, const StateSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dimension());
    Matrix a = Matrix::Zero(d, d);
    const auto ri = static_cast<std::size_t>(rail);
    for (std::size_t col = 0; col < space.dimension(); ++col) {
        const auto& s = space.state(col);
        const int n = s.photons[ri];
        if (n == 0) continue;
        BasisState t = s;
        t.photons[ri] -= 1;
        if (auto row = space.index_of(t)) {
            a(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) = std::sqrt(static_cast<double>(n));
        }
    }
    return a;
}

Matrix creation_matrix(Rail rail, const StateSpace& space) { return annihilation_matrix(rail, space).adjoint(); }

Matrix number_matrix(Rail rail, const StateSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dimension());
    Matrix n = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) n(i, i) = space.state(static_cast<std::size_t>(i)).photons_on(rail);
    return n;
}

Matrix atom_lowering_matrix(Atom atom, const StateSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dimension());
    Matrix sigma = Matrix::Zero(d, d);
    const auto ai = static_cast<std::size_t>(atom);
    for (std::size_t col = 0; col < space.dimension(); ++col) {
        const auto& s = space.state(col);
        if (s.atoms[ai] != Level::e) continue;
        BasisState t = s;
        t.atoms[ai] = Level::g;
        if (auto row = space.index_of(t)) {
            sigma(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col)) = 1.0;
        }
    }
    return sigma;
}

Matrix atom_raising_matrix(Atom atom, const StateSpace& space) { return atom_lowering_matrix(atom, space).adjoint(); }

Matrix total_excitation_matrix(const StateSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dimension());
    Matrix n = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) n(i, i) = space.state(static_cast<std::size_t>(i)).total_excitation();
    return n;
}

PureState::PureState(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {
    const double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
        throw ValidationError("pure state norm is " + std::to_string(norm) + ", expected 1");
    }
}

PureState PureState::basis(const StateSpace& space, const BasisState& s) {
    auto idx = space.index_of(s);
    if (!idx) throw ValidationError("state " + s.label() + " is not in the state space");
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    v(static_cast<Eigen::Index>(*idx)) = 1.0;
    return PureState(std::move(v));
}

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0) throw ValidationError("density matrix must be square and non-empty");
    if (hermiticity_defect(rho_) > 1e-12) throw ValidationError("density matrix is not Hermitian");
    const double tr = rho_.trace().real();
    if (!(tr > 0.0) || tr > 1.0 + 1e-12) throw ValidationError("density matrix trace outside (0, 1]");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-9) throw ValidationError("density matrix has a negative eigenvalue");
}

BasisState dual_rail_state(int qx, int qy) {
    if ((qx != 0 && qx != 1) || (qy != 0 && qy != 1)) throw ValidationError("qubit values must be 0 or 1");
    return BasisState::make(qx, 1 - qx, qy, 1 - qy);
}

PureState dual_rail_encode(int qx, int qy, const StateSpace& space) {
    return PureState::basis(space, dual_rail_state(qx, qy));
}

PhotonicState partial_trace_atoms(const Matrix& rho, const StateSpace& space) {
    if (static_cast<std::size_t>(rho.rows()) != space.dimension() || rho.rows() != rho.cols()) {
        throw ValidationError("density matrix does not match the state space");
    }
    std::set<Occupation> occupations;
    for (const auto& s : space.states()) occupations.insert(s.photons);
    PhotonicState out;
    out.basis.assign(occupations.begin(), occupations.end());
    std::map<Occupation, Eigen::Index> row_of;
    for (std::size_t i = 0; i < out.basis.size(); ++i) row_of[out.basis[i]] = static_cast<Eigen::Index>(i);

    const auto dp = static_cast<Eigen::Index>(out.basis.size());
    out.rho = Matrix::Zero(dp, dp);
    const auto d = static_cast<Eigen::Index>(space.dimension());
    for (Eigen::Index i = 0; i < d; ++i) {
        const auto& si = space.state(static_cast<std::size_t>(i));
        for (Eigen::Index j = 0; j < d; ++j) {
            const auto& sj = space.state(static_cast<std::size_t>(j));
            if (si.atoms != sj.atoms) continue;
            out.rho(row_of[si.photons], row_of[sj.photons]) += rho(i, j);
        }
    }
    return out;
}

}  // namespace csign
