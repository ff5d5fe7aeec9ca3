#pragma once

// Trotterized master-equation stepper: exact unitary conjugation for each
// step followed by a first-order dissipator evaluated on the pre-step state,
//
//   rho' = U rho U^+ + dt * sum_i (L_i rho L_i^+ - 1/2 {L_i^+ L_i, rho}),
//   U = exp(-i dt H).

#include <cstddef>
#include <functional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "csign/types.hpp"

namespace csign {

/// Jump operator with its strength already folded in (L = l * a).
struct LindbladChannel {
    Matrix jump;
    std::string label;

    bool is_zero() const { return jump.size() == 0 || jump.cwiseAbs().maxCoeff() == 0.0; }
};

struct StepperConfig {
    double dt = 1e-3;
    bool renormalize = false;
    /// Emit a StepDiagnostic every N steps; 0 disables the stream.
    std::size_t diagnostics_every = 0;
    /// Abort when |tr(rho) - tr(rho_0)| exceeds this.
    double max_trace_drift = 1e-3;
    /// With no active channel, apply exp(-iHT) once instead of stepping.
    bool exact_closed = true;

    void validate() const;
};

struct StepDiagnostic {
    std::size_t step;
    double time;
    double trace;
    double min_eigenvalue;
};

using DiagnosticSink = std::function<void(const StepDiagnostic&)>;

/// Sink writing "step,time,trace,min_eig" rows; writes the header on construction.
DiagnosticSink csv_diagnostic_sink(std::ostream& os);

struct EvolveResult {
    Matrix rho;
    std::size_t steps = 0;
    double trace_drift = 0.0;
    double min_eigenvalue = 0.0;
    /// dt times the spectral radius of H exceeded 0.1.
    bool stiff_step = false;
};

/// Spectral decomposition of a Hermitian generator, reusable for many durations.
class HermitianGenerator {
public:
    /// Throws NumericalError when H deviates from Hermitian by more than 1e-9.
    explicit HermitianGenerator(const Matrix& h);

    /// exp(-i t H).
    Matrix propagator(double t) const;
    double spectral_radius() const;
    const RealVector& eigenvalues() const { return eigenvalues_; }

private:
    Matrix eigenvectors_;
    RealVector eigenvalues_;
};

Matrix unitary_step_matrix(const Matrix& h, double dt);

/// One literal update. Hermiticity is restored by symmetrization.
Matrix lindblad_step(const Matrix& rho, const Matrix& u, std::span<const LindbladChannel> channels, double dt);

/// ceil(T/dt) steps, the last one shortened to land exactly on T.
EvolveResult evolve(const Matrix& rho, const Matrix& h, std::span<const LindbladChannel> channels, double total_time,
                    const StepperConfig& cfg, const DiagnosticSink& sink = {});

double min_eigenvalue(const Matrix& hermitian);

}  // namespace csign
