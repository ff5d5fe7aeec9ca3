#pragma once

// The C-Sign array: BS1 -> two simultaneous cavity NS stages -> optional
// phase shifters -> BS2, compared against the ideal controlled-sign output.

#include <cstdint>
#include <string>

#include "csign/dynamics.hpp"
#include "csign/fock.hpp"
#include "csign/lindblad.hpp"

namespace csign {

/// Which density matrices the error metric compares.
enum class ErrorBasis {
    full,      // photons and atoms; the ideal output has both atoms in g
    photonic,  // atoms traced out on both sides
};

/// What realizes the nonlinear sign stage.
enum class NsStage {
    cavity,  // Jaynes-Cummings evolution with leakage
    ideal,   // diag(1, 1, -1) on each cavity rail
};

std::string to_string(ErrorBasis basis);
std::string to_string(NsStage stage);
std::string to_string(Frame frame);

/// Dimensionless knobs of one array run. Durations are in units of
/// pi / (sqrt2 g), so integer t puts the two-photon block at t half-periods.
struct SimParams {
    double t = 0.0;
    double delta_over_g = 0.0;
    double ly_over_g = 0.0;
    int phs = 0;

    double g = PhysParams::kDefaultG;
    double omega_c_over_g = PhysParams::kDefaultOmegaCOverG;
    double atom_decay_over_g = 0.0;

    /// Stepper settings; dt is derived as duration() / steps.
    std::size_t steps = 20000;
    StepperConfig stepper{};

    Frame frame = Frame::rotating;
    ErrorBasis error_basis = ErrorBasis::full;
    NsStage ns_stage = NsStage::cavity;

    /// Absolute NS duration T = t pi / (sqrt2 g).
    double duration() const;
    PhysParams physics() const;
    StepperConfig stepper_config() const;
    void validate() const;
};

double duration_from_t(double t, double g);
double t_from_duration(double duration, double g);

struct GateReport {
    SimParams params;
    Matrix rho_out;              // full array state after BS2
    PhotonicState photonic_out;  // atoms traced out
    double error = 0.0;
    double phase_shift = 0.0;    // angle applied on each cavity rail (0 when phs = 0)
    double trace_drift = 0.0;
    double atom_residual = 0.0;  // output population with an excited atom
    double min_eigenvalue = 0.0;
    std::size_t steps = 0;
    std::size_t dimension = 0;
    bool stiff_step = false;

    double validity() const { return 1.0 - error; }
};

/// Params, error and diagnostics; matrices only on request.
std::string to_json(const GateReport& report, bool include_matrices = false);

/// 50/50 beamsplitter on two rails, identity elsewhere.
Matrix beamsplitter_unitary(Rail a, Rail b, const StateSpace& space);

/// diag(exp(i n phi)) on the rail's occupation n.
Matrix phase_shifter_unitary(Rail rail, double phi, const StateSpace& space);

/// Ideal nonlinear sign amplitude for occupation 0, 1, 2.
Complex ideal_ns_amplitude(int n);

/// Ideal NS on both cavity rails (x1 and y1).
Matrix ideal_ns_matrix(const StateSpace& space);

/// diag(1,1,1,-1) conjugation on the computational states. Throws when the
/// input has weight outside the computational subspace.
Matrix ideal_csign(const DensityMatrix& rho_in, const StateSpace& space);

/// Same map built as BS1 . (NS x NS) . BS2.
Matrix ideal_csign_linear_optics(const DensityMatrix& rho_in, const StateSpace& space);

/// Logical 4x4 version over {|00>,|01>,|10>,|11>}.
Eigen::Matrix4cd ideal_csign_logical(const Eigen::Matrix4cd& rho);

/// Uniform superposition of the four dual-rail computational states.
DensityMatrix p_test(const StateSpace& space);

/// Seeded random pure state on the computational subspace.
DensityMatrix random_valid_input(const StateSpace& space, std::uint64_t seed);

/// Largest absolute eigenvalue of expected - result.
double error_rate(const Matrix& expected, const Matrix& result);

/// phase of the one-photon cavity amplitude relative to the vacuum one after
/// duration T; the phs correction applies -beta on each cavity rail.
double one_photon_phase(double duration, const PhysParams& p);

GateReport run_array(const DensityMatrix& rho_in, const SimParams& params, const DiagnosticSink& sink = {});

}  // namespace csign
