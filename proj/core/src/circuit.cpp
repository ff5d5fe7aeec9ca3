#include "csign/circuit.hpp"

#include <cmath>
#include <random>
#include <vector>

#include <json.hpp>

namespace csign {

namespace {

bool is_computational(const BasisState& s) {
    for (const auto& seed : computational_seeds()) {
        if (s == seed) return true;
    }
    return false;
}

// Sign pattern of the controlled-sign gate on the computational states.
Matrix csign_diagonal(const StateSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dimension());
    Matrix c = Matrix::Identity(d, d);
    if (auto idx = space.index_of(dual_rail_state(1, 1))) {
        c(static_cast<Eigen::Index>(*idx), static_cast<Eigen::Index>(*idx)) = -1.0;
    }
    return c;
}

void require_support(const Matrix& rho, const StateSpace& space, bool (*allowed)(const BasisState&),
                     const char* what) {
    const auto d = static_cast<Eigen::Index>(space.dimension());
    if (rho.rows() != d || rho.cols() != d) throw ValidationError("input dimension does not match the state space");
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            if (std::abs(rho(i, j)) <= 1e-12) continue;
            if (!allowed(space.state(static_cast<std::size_t>(i))) ||
                !allowed(space.state(static_cast<std::size_t>(j)))) {
                throw ValidationError(std::string("input has weight outside ") + what);
            }
        }
    }
}

Matrix conjugate(const Matrix& u, const Matrix& rho) { return u * rho * u.adjoint(); }

const Matrix& array_beamsplitter() {
    static const Matrix bs = beamsplitter_unitary(Rail::x1, Rail::y1, array_space());
    return bs;
}

double excited_population(const Matrix& rho, const StateSpace& space) {
    double p = 0.0;
    for (std::size_t i = 0; i < space.dimension(); ++i) {
        if (space.state(i).atom_excitations() > 0) {
            p += rho(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
        }
    }
    return p;
}

nlohmann::json matrix_to_json(const Matrix& m) {
    nlohmann::json re = nlohmann::json::array();
    nlohmann::json im = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<double> r, c;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            r.push_back(m(i, j).real());
            c.push_back(m(i, j).imag());
        }
        re.push_back(r);
        im.push_back(c);
    }
    return {{"re", re}, {"im", im}};
}

}  // namespace

std::string to_string(ErrorBasis basis) { return basis == ErrorBasis::full ? "full" : "photonic"; }
std::string to_string(NsStage stage) { return stage == NsStage::cavity ? "cavity" : "ideal"; }
std::string to_string(Frame frame) { return frame == Frame::lab ? "lab" : "rotating"; }

double duration_from_t(double t, double g) { return t * kPi / (std::sqrt(2.0) * g); }
double t_from_duration(double duration, double g) { return duration * std::sqrt(2.0) * g / kPi; }

double SimParams::duration() const { return duration_from_t(t, g); }

PhysParams SimParams::physics() const { return PhysParams::from_ratios(delta_over_g, g, omega_c_over_g); }

StepperConfig SimParams::stepper_config() const {
    StepperConfig cfg = stepper;
    const double total = duration();
    cfg.dt = total > 0.0 ? total / static_cast<double>(steps) : 1.0;
    return cfg;
}

void SimParams::validate() const {
    if (!std::isfinite(t) || t < 0.0) throw ValidationError("t must be a finite value >= 0");
    if (!std::isfinite(delta_over_g)) throw ValidationError("delta_over_g must be finite");
    if (!std::isfinite(ly_over_g) || ly_over_g < 0.0) throw ValidationError("ly_over_g must be >= 0");
    if (phs != 0 && phs != 1) throw ValidationError("phs must be 0 or 1");
    if (!std::isfinite(atom_decay_over_g) || atom_decay_over_g < 0.0) {
        throw ValidationError("atom_decay_over_g must be >= 0");
    }
    if (!std::isfinite(omega_c_over_g) || omega_c_over_g <= 0.0) throw ValidationError("omega_c_over_g must be > 0");
    if (steps == 0) throw ValidationError("steps must be >= 1");
    physics().validate();
    if (!(stepper.max_trace_drift > 0.0)) throw ValidationError("max_trace_drift must be positive");
}

std::string to_json(const GateReport& r, bool include_matrices) {
    const SimParams& p = r.params;
    nlohmann::json j;
    j["params"] = {
        {"t", p.t},
        {"delta_over_g", p.delta_over_g},
        {"ly_over_g", p.ly_over_g},
        {"phs", p.phs},
        {"g", p.g},
        {"omega_c_over_g", p.omega_c_over_g},
        {"atom_decay_over_g", p.atom_decay_over_g},
        {"steps", p.steps},
        {"frame", to_string(p.frame)},
        {"error_basis", to_string(p.error_basis)},
        {"ns_stage", to_string(p.ns_stage)},
        {"duration", p.duration()},
    };
    j["error"] = r.error;
    j["validity"] = r.validity();
    j["diagnostics"] = {
        {"trace_drift", r.trace_drift},
        {"atom_residual", r.atom_residual},
        {"min_eigenvalue", r.min_eigenvalue},
        {"phase_shift", r.phase_shift},
        {"steps", r.steps},
        {"dimension", r.dimension},
        {"stiff_step", r.stiff_step},
    };
    if (include_matrices) {
        j["rho_out"] = matrix_to_json(r.rho_out);
        j["rho_photonic"] = matrix_to_json(r.photonic_out.rho);
    }
    return j.dump(2);
}

Matrix beamsplitter_unitary(Rail a, Rail b, const StateSpace& space) {
    if (a == b) throw ValidationError("beamsplitter needs two distinct rails");
    const auto d = static_cast<Eigen::Index>(space.dimension());
    Matrix u = Matrix::Zero(d, d);
    const auto ai = static_cast<std::size_t>(a);
    const auto bi = static_cast<std::size_t>(b);
    for (Eigen::Index col = 0; col < d; ++col) {
        const BasisState& s = space.state(static_cast<std::size_t>(col));
        for (const auto& amp : beamsplitter_expansion(s.photons[ai], s.photons[bi])) {
            BasisState t = s;
            t.photons[ai] = static_cast<std::uint8_t>(amp.first);
            t.photons[bi] = static_cast<std::uint8_t>(amp.second);
            if (auto row = space.index_of(t)) u(static_cast<Eigen::Index>(*row), col) = amp.amplitude;
        }
    }
    return u;
}

Matrix phase_shifter_unitary(Rail rail, double phi, const StateSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dimension());
    Matrix u = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const int n = space.state(static_cast<std::size_t>(i)).photons_on(rail);
        u(i, i) = std::exp(Complex{0.0, n * phi});
    }
    return u;
}

Complex ideal_ns_amplitude(int n) {
    switch (n) {
        case 0:
        case 1: return 1.0;
        case 2: return -1.0;
        default: throw ValidationError("ideal NS is defined on occupations 0..2");
    }
}

Matrix ideal_ns_matrix(const StateSpace& space) {
    const auto d = static_cast<Eigen::Index>(space.dimension());
    Matrix u = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        const BasisState& s = space.state(static_cast<std::size_t>(i));
        u(i, i) = ideal_ns_amplitude(s.photons_on(Rail::x1)) * ideal_ns_amplitude(s.photons_on(Rail::y1));
    }
    return u;
}

Matrix ideal_csign(const DensityMatrix& rho_in, const StateSpace& space) {
    require_support(rho_in.matrix(), space, is_computational, "the computational subspace");
    return conjugate(csign_diagonal(space), rho_in.matrix());
}

Matrix ideal_csign_linear_optics(const DensityMatrix& rho_in, const StateSpace& space) {
    require_support(rho_in.matrix(), space, is_computational, "the computational subspace");
    const Matrix bs = beamsplitter_unitary(Rail::x1, Rail::y1, space);
    const Matrix u = bs * ideal_ns_matrix(space) * bs;
    return conjugate(u, rho_in.matrix());
}

Eigen::Matrix4cd ideal_csign_logical(const Eigen::Matrix4cd& rho) {
    Eigen::Matrix4cd c = Eigen::Matrix4cd::Identity();
    c(3, 3) = -1.0;
    return c * rho * c.adjoint();
}

DensityMatrix p_test(const StateSpace& space) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    for (const auto& s : computational_seeds()) {
        auto idx = space.index_of(s);
        if (!idx) throw ValidationError("computational state " + s.label() + " missing from the space");
        v(static_cast<Eigen::Index>(*idx)) = 0.5;
    }
    return DensityMatrix::from_pure(PureState(v));
}

DensityMatrix random_valid_input(const StateSpace& space, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector v = Vector::Zero(static_cast<Eigen::Index>(space.dimension()));
    for (const auto& s : computational_seeds()) {
        auto idx = space.index_of(s);
        if (!idx) throw ValidationError("computational state " + s.label() + " missing from the space");
        const double re = normal(rng);
        const double im = normal(rng);
        v(static_cast<Eigen::Index>(*idx)) = Complex{re, im};
    }
    v /= v.norm();
    return DensityMatrix::from_pure(PureState(v));
}

double error_rate(const Matrix& expected, const Matrix& result) {
    if (expected.rows() != result.rows() || expected.cols() != result.cols()) {
        throw ValidationError("error_rate: dimension mismatch");
    }
    if (expected.size() == 0) return 0.0;
    const Matrix diff = expected - result;
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double one_photon_phase(double duration, const PhysParams& p) {
    const CavityAmplitudes vac = analytic_evolve(1.0, 0.0, 0.0, duration, p);
    const CavityAmplitudes one = analytic_evolve(0.0, 1.0, 0.0, duration, p);
    return std::arg(one.g1 / vac.g0);
}

GateReport run_array(const DensityMatrix& rho_in, const SimParams& params, const DiagnosticSink& sink) {
    params.validate();
    const StateSpace& space = array_space();
    require_support(rho_in.matrix(), space, is_computational, "the dual-rail computational subspace");

    GateReport report;
    report.params = params;
    report.dimension = space.dimension();

    const Matrix& bs = array_beamsplitter();
    Matrix rho = conjugate(bs, rho_in.matrix());

    const PhysParams phys = params.physics();
    const double duration = params.duration();

    if (params.ns_stage == NsStage::ideal) {
        rho = conjugate(ideal_ns_matrix(space), rho);
    } else {
        const Matrix h = build_array_hamiltonian(space, phys, params.frame);
        std::vector<LindbladChannel> channels;
        const double leak = params.ly_over_g * params.g;
        if (leak > 0.0) {
            channels.push_back({leak * annihilation_matrix(Rail::x1, space), "leak-cavity-A"});
            channels.push_back({leak * annihilation_matrix(Rail::y1, space), "leak-cavity-B"});
        }
        const double decay = params.atom_decay_over_g * params.g;
        if (decay > 0.0) {
            channels.push_back({decay * atom_lowering_matrix(Atom::a1, space), "decay-atom-1"});
            channels.push_back({decay * atom_lowering_matrix(Atom::a2, space), "decay-atom-2"});
        }
        const EvolveResult evolved = evolve(rho, h, channels, duration, params.stepper_config(), sink);
        rho = evolved.rho;
        report.steps = evolved.steps;
        report.stiff_step = evolved.stiff_step;

        if (params.phs == 1) {
            report.phase_shift = -one_photon_phase(duration, phys);
            const Matrix shift = phase_shifter_unitary(Rail::x1, report.phase_shift, space) *
                                 phase_shifter_unitary(Rail::y1, report.phase_shift, space);
            rho = conjugate(shift, rho);
        }
    }

    rho = conjugate(bs, rho);
    rho = 0.5 * (rho + rho.adjoint());

    const Matrix expected = ideal_csign(rho_in, space);
    report.rho_out = rho;
    report.photonic_out = partial_trace_atoms(rho, space);
    if (params.error_basis == ErrorBasis::full) {
        report.error = error_rate(expected, rho);
    } else {
        report.error = error_rate(partial_trace_atoms(expected, space).rho, report.photonic_out.rho);
    }
    report.trace_drift = std::abs(rho.trace().real() - rho_in.trace());
    report.atom_residual = excited_population(rho, space);
    report.min_eigenvalue = min_eigenvalue(rho);
    return report;
}

}  // namespace csign
