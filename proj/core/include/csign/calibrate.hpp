#pragma once

// Analytic pre-selection of NS durations and detunings from the closed-form
// single-cavity evolution: the recurrence progressions of the 0/1/2-photon
// sectors, phase-mismatch ranking and commensurable detunings.

#include <cstdint>
#include <string>
#include <vector>

#include "csign/dynamics.hpp"

namespace csign {

/// Arithmetic progression of absolute times within a horizon.
struct Progression {
    double first = 0.0;
    double step = 0.0;
    std::vector<double> times;
    /// The condition holds at every time (0-photon sector at zero detuning).
    bool unconstrained = false;
};

/// A: vacuum phase back to its target; B: sin(Omega_0 T/2) = 0 (|1> -> +-|1>,
/// sign fixable by the phase shifter); C: |2> -> -|2>.
struct ProgressionSet {
    Progression a;
    Progression b;
    Progression c;
};

ProgressionSet progressions(const PhysParams& p, double horizon);

/// Phases (a, b, c) acquired by the 0, 1, 2 photon states.
struct PhaseTarget {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
};

/// True iff a + c != 2b (mod 2 pi) beyond `tol`.
bool check_nonlinearity(const PhaseTarget& phases, double tol = 1e-9);

/// Distance of an angle from zero after wrapping into (-pi, pi].
double wrapped_distance(double angle);

/// Single-cavity response after duration T, phases relative to the vacuum.
struct SectorResponse {
    PhaseTarget phases;       // a = 0 by construction
    double excitation1 = 0.0; // |<e,0|U|g,1>|
    double excitation2 = 0.0; // |<e,1|U|g,2>|
};

SectorResponse sector_response(double duration, const PhysParams& p);

struct MismatchOptions {
    /// Allow a linear phase shift to remove the one-photon phase.
    bool phase_correction = true;
    double phase_weight = 1.0;
    double excitation_weight = 1.0;
};

/// Phase distance from the NS target plus residual atom-excitation amplitude.
double mismatch(double duration, const PhysParams& p, const MismatchOptions& opts = {});

/// Residual of the exact (uncorrected) NS conditions: both Rabi blocks closed,
/// b = 0 and c = pi. Zero only at an exact solution.
double exact_ns_residual(double duration, const PhysParams& p);

struct TauResult {
    double t = 0.0;         // dimensionless, T = t pi / (sqrt2 g)
    double duration = 0.0;  // absolute
    double residual = 0.0;
};

enum class TauSearch {
    progression,  // rank the progression-C times (exact |2> -> -|2>)
    dense,        // any t: grid, then golden-section refinement of grid minima
};

/// Duration in [t_min, t_max] (dimensionless t) minimizing the mismatch.
/// The dense search can settle between recurrences, where the one- and
/// two-photon blocks are both partly open. An empty range yields an infinite
/// residual.
TauResult best_tau(const PhysParams& p, double t_min, double t_max, const MismatchOptions& opts = {},
                   TauSearch search = TauSearch::progression, double grid_step = 0.01);

struct Candidate {
    double t = 0.0;
    double delta_over_g = 0.0;
    double residual = 0.0;
};

/// One row per progression-C time with t in [t_min, t_max].
std::vector<Candidate> candidate_table(const PhysParams& p, double t_min, double t_max,
                                       const MismatchOptions& opts = {});

/// Keeps a row iff its residual is strictly below every kept row with smaller t.
std::vector<Candidate> running_minimum(std::vector<Candidate> rows);

/// sqrt(4 + d^2) / sqrt(8 + d^2), i.e. Omega_0 / Omega_1.
double rabi_ratio(double d);

/// d = delta / g such that rabi_ratio(d) == r; requires 1/sqrt2 < r < 1.
double commensurable_detuning(double r);
double commensurable_detuning(std::int64_t num, std::int64_t den);

/// Parses "p/q" or a decimal.
double parse_ratio(const std::string& text);

}  // namespace csign
