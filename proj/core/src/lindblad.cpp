#include "csign/lindblad.hpp"

#include <cmath>
#include <iomanip>

#include <Eigen/Sparse>

namespace csign {

namespace {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

bool is_diagonal(const Matrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i != j && m(i, j) != Complex{0.0, 0.0}) return false;
        }
    }
    return true;
}

// Precomputed pieces of the dissipator, shared by every step of one evolution.
class Dissipator {
public:
    explicit Dissipator(std::span<const LindbladChannel> channels) {
        for (const auto& ch : channels) {
            if (ch.is_zero()) continue;
            SparseMatrix l = ch.jump.sparseView();
            SparseMatrix ld = SparseMatrix(l.adjoint());
            jumps_.push_back({std::move(l), std::move(ld)});
            if (anticommutator_.size() == 0) anticommutator_ = Matrix::Zero(ch.jump.rows(), ch.jump.cols());
            anticommutator_ += ch.jump.adjoint() * ch.jump;
        }
        diagonal_ = anticommutator_.size() != 0 && is_diagonal(anticommutator_);
        if (diagonal_) k_diag_ = anticommutator_.diagonal();
    }

    bool empty() const { return jumps_.empty(); }

    // sum_i L rho L^+ - 1/2 (K rho + rho K)
    Matrix apply(const Matrix& rho) const {
        Matrix out = Matrix::Zero(rho.rows(), rho.cols());
        for (const auto& [l, ld] : jumps_) {
            Matrix lr = l * rho;
            out.noalias() += lr * ld;
        }
        if (diagonal_) {
            for (Eigen::Index j = 0; j < rho.cols(); ++j) {
                for (Eigen::Index i = 0; i < rho.rows(); ++i) {
                    out(i, j) -= 0.5 * (k_diag_(i) + k_diag_(j)) * rho(i, j);
                }
            }
        } else {
            out.noalias() -= 0.5 * (anticommutator_ * rho);
            out.noalias() -= 0.5 * (rho * anticommutator_);
        }
        return out;
    }

private:
    struct Jump {
        SparseMatrix l;
        SparseMatrix ld;
    };
    std::vector<Jump> jumps_;
    Matrix anticommutator_;
    Vector k_diag_;
    bool diagonal_ = false;
};

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace

void StepperConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("stepper dt must be positive");
    if (!(max_trace_drift > 0.0)) throw ValidationError("max_trace_drift must be positive");
}

DiagnosticSink csv_diagnostic_sink(std::ostream& os) {
    os << "step,time,trace,min_eig\n";
    return [&os](const StepDiagnostic& d) {
        os << d.step << ',' << std::setprecision(17) << d.time << ',' << d.trace << ',' << d.min_eigenvalue << '\n';
    };
}

HermitianGenerator::HermitianGenerator(const Matrix& h) {
    if (h.rows() != h.cols()) throw NumericalError("generator must be square");
    const double defect = hermiticity_defect(h);
    if (defect > 1e-9) throw NumericalError("generator is not Hermitian (defect " + std::to_string(defect) + ")");
    if (h.size() == 0) return;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(h));
    eigenvectors_ = es.eigenvectors();
    eigenvalues_ = es.eigenvalues();
}

Matrix HermitianGenerator::propagator(double t) const {
    const Eigen::Index d = eigenvalues_.size();
    Vector phases(d);
    for (Eigen::Index k = 0; k < d; ++k) phases(k) = std::exp(Complex{0.0, -eigenvalues_(k) * t});
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

double HermitianGenerator::spectral_radius() const {
    return eigenvalues_.size() == 0 ? 0.0 : eigenvalues_.cwiseAbs().maxCoeff();
}

Matrix unitary_step_matrix(const Matrix& h, double dt) { return HermitianGenerator(h).propagator(dt); }

Matrix lindblad_step(const Matrix& rho, const Matrix& u, std::span<const LindbladChannel> channels, double dt) {
    Matrix next = u * rho * u.adjoint();
    const Dissipator dissipator(channels);
    if (!dissipator.empty()) next += dt * dissipator.apply(rho);
    return symmetrized(next);
}

double min_eigenvalue(const Matrix& hermitian) {
    if (hermitian.size() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrized(hermitian), Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

EvolveResult evolve(const Matrix& rho, const Matrix& h, std::span<const LindbladChannel> channels, double total_time,
                    const StepperConfig& cfg, const DiagnosticSink& sink) {
    cfg.validate();
    if (!(total_time >= 0.0) || !std::isfinite(total_time)) throw ValidationError("evolution time must be >= 0");
    if (rho.rows() != h.rows() || rho.cols() != h.cols()) throw ValidationError("rho and H dimensions differ");

    const double initial_trace = rho.trace().real();
    EvolveResult result;
    result.rho = rho;
    if (total_time == 0.0) {
        result.min_eigenvalue = min_eigenvalue(rho);
        return result;
    }

    const HermitianGenerator generator(h);
    const Dissipator dissipator(channels);
    result.stiff_step = cfg.dt * generator.spectral_radius() > 0.1;

    const auto steps = static_cast<std::size_t>(std::ceil(total_time / cfg.dt - 1e-9));
    result.steps = std::max<std::size_t>(steps, 1);
    const double last_dt = total_time - static_cast<double>(result.steps - 1) * cfg.dt;

    if (dissipator.empty() && cfg.exact_closed) {
        const Matrix u = generator.propagator(total_time);
        result.rho = symmetrized(u * rho * u.adjoint());
        if (cfg.renormalize) result.rho /= result.rho.trace().real();
    } else {
        const Matrix u = generator.propagator(cfg.dt);
        const Matrix u_last = generator.propagator(last_dt);
        Matrix current = rho;
        for (std::size_t step = 1; step <= result.steps; ++step) {
            const bool last = step == result.steps;
            const double dt = last ? last_dt : cfg.dt;
            const Matrix& uu = last ? u_last : u;
            Matrix next = uu * current * uu.adjoint();
            if (!dissipator.empty()) next.noalias() += dt * dissipator.apply(current);
            current = symmetrized(next);
            if (cfg.renormalize) current /= current.trace().real();

            const double tr = current.trace().real();
            if (!std::isfinite(tr) || std::abs(tr - initial_trace) > cfg.max_trace_drift) {
                throw NumericalError("trace drifted to " + std::to_string(tr) + " at step " + std::to_string(step) +
                                     "; reduce dt");
            }
            if (sink && cfg.diagnostics_every > 0 && (step % cfg.diagnostics_every == 0 || last)) {
                const double time = last ? total_time : static_cast<double>(step) * cfg.dt;
                sink({step, time, tr, min_eigenvalue(current)});
            }
        }
        result.rho = std::move(current);
    }

    result.trace_drift = std::abs(result.rho.trace().real() - initial_trace);
    if (!std::isfinite(result.trace_drift) || result.trace_drift > cfg.max_trace_drift) {
        throw NumericalError("trace drift " + std::to_string(result.trace_drift) + " exceeds bound");
    }
    result.min_eigenvalue = min_eigenvalue(result.rho);
    return result;
}

}  // namespace csign
