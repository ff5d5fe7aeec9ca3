#pragma once

// Grid sweeps over the array simulation, optimal-set extraction and the
// detuned-optimum search.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "csign/circuit.hpp"

namespace csign {

enum class SweepParam { t, delta_over_g, ly_over_g, phs };

std::string to_string(SweepParam param);
SweepParam parse_sweep_param(const std::string& name);

/// One swept parameter. Values are start, start + step, ... <= stop, plus
/// `extra` values, sorted and deduplicated. `log_points` > 0 switches to
/// that many log-spaced points per decade from start to stop.
struct Axis {
    SweepParam param = SweepParam::t;
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    int log_points = 0;
    std::vector<double> extra;

    std::vector<double> values() const;
};

enum class InputKind { p_test, random };

struct SweepSpec {
    std::vector<Axis> axes;  // at most two; the first varies slowest
    SimParams fixed;
    InputKind input = InputKind::p_test;
    std::uint64_t seed = 0;
    unsigned workers = 1;
    bool record_timing = false;

    void validate() const;
    std::size_t size() const;
    /// Parameters at flat grid index `i`.
    SimParams point(std::size_t i) const;
};

struct SweepRecord {
    std::size_t index = 0;
    SimParams params;
    double error = 0.0;
    double trace_drift = 0.0;
    double atom_residual = 0.0;
    double wall_ms = 0.0;
    bool ok = true;
    std::string failure;
};

DensityMatrix sweep_input(const SweepSpec& spec);

/// One record per grid point in index order. Point failures are recorded,
/// never thrown.
std::vector<SweepRecord> run_sweep(const SweepSpec& spec);

struct OptimalEntry {
    double t = 0.0;
    double delta_over_g = 0.0;
    double error = 0.0;
};

/// Running-minimum filter over records sorted by t; failed records are skipped.
std::vector<OptimalEntry> extract_optimal_set(std::vector<SweepRecord> records);

struct Optimum {
    double t = 0.0;
    double delta_over_g = 0.0;
    double error = 0.0;
};

struct OptimumSearch {
    double t_lo = 0.0, t_hi = 0.0, t_step = 0.05;
    double delta_lo = 0.0, delta_hi = 0.0, delta_step = 0.05;
    int rounds = 3;
    std::size_t starts = 8;  // grid local minima refined
};

/// Grid search then coordinate descent from the best grid local minima,
/// with resolution shrinking x10 per round. `base` supplies every other field.
Optimum find_detuned_optimum(const SimParams& base, const OptimumSearch& search, const DensityMatrix& input,
                             unsigned workers = 1);

/// Error at the optimum for each detuning offset (l_y = base) and for each
/// leak value (offset 0). Records are offsets first, then leaks.
std::vector<SweepRecord> robustness_profile(const SimParams& base, const Optimum& optimum,
                                            const std::vector<double>& delta_offsets,
                                            const std::vector<double>& leaks, const DensityMatrix& input,
                                            unsigned workers = 1);

/// CSV with header t,delta_over_g,ly_over_g,phs,error,trace_drift,wall_ms.
std::string sweep_csv(const std::vector<SweepRecord>& records);

std::string spec_json(const SweepSpec& spec);
/// FNV-1a 64 of the canonical spec JSON.
std::string spec_hash(const SweepSpec& spec);
std::string manifest_json(const SweepSpec& spec, std::size_t rows);

/// Library version string.
std::string version();

/// Writes via a sibling temp file and rename.
void write_file_atomic(const std::string& path, const std::string& contents);

/// Shortest round-tripping decimal for a double.
std::string format_double(double value);

}  // namespace csign
