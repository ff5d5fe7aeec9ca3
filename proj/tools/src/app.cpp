#include "csign_cli/app.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "csign/calibrate.hpp"

namespace csign::cli {

namespace {

struct Flags {
    std::string config;
    Overrides o;
};

void add_common(CLI::App* sub, Flags& f) {
    sub->add_option("--config", f.config, "JSON run configuration");
    sub->add_option("--t", f.o.t, "NS duration in units of pi/(sqrt2 g)");
    sub->add_option("--delta-over-g", f.o.delta_over_g, "atom-cavity detuning over g");
    sub->add_option("--ly-over-g", f.o.ly_over_g, "photon leak rate over g");
    sub->add_option("--phs", f.o.phs, "apply the one-photon phase correction (0 or 1)");
    sub->add_option("--dt-steps", f.o.dt_steps, "integrator steps per NS stage");
    sub->add_option("--workers", f.o.workers, "parallel sweep workers");
    sub->add_option("--seed", f.o.seed, "seed for random inputs");
    sub->add_option("--out", f.o.out, "output path");
}

std::string snap(double x) {
    const double r = std::round(x);
    return format_double(std::abs(x - r) < 1e-9 ? r : x);
}

void emit(const std::string& text, const RunConfig& cfg, std::ostream& out) {
    if (cfg.output.out.empty()) {
        out << text;
    } else {
        write_file_atomic(cfg.output.out, text);
    }
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out) {
    SimParams params = cfg.sim;
    params.validate();
    const DensityMatrix input = sweep_input(cfg.sweep);

    std::ostringstream diag;
    DiagnosticSink sink;
    if (!cfg.output.diagnostics.empty()) {
        if (params.stepper.diagnostics_every == 0) params.stepper.diagnostics_every = 100;
        sink = csv_diagnostic_sink(diag);
    }
    const GateReport report = run_array(input, params, sink);
    const std::string json = to_json(report, cfg.output.include_matrices) + "\n";
    out << json;
    if (!cfg.output.out.empty()) write_file_atomic(cfg.output.out, json);
    if (!cfg.output.diagnostics.empty()) write_file_atomic(cfg.output.diagnostics, diag.str());
    return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    SweepSpec spec = cfg.sweep;
    spec.fixed = cfg.sim;
    const auto records = run_sweep(spec);
    std::size_t failed = 0;
    for (const auto& r : records) failed += r.ok ? 0 : 1;
    if (failed > 0) err << failed << " of " << records.size() << " sweep points failed\n";

    const std::string csv = sweep_csv(records);
    if (cfg.output.out.empty()) {
        out << csv;
        return kOk;
    }
    std::filesystem::path manifest(cfg.output.out);
    manifest.replace_extension(".manifest.json");
    write_file_atomic(cfg.output.out, csv);
    write_file_atomic(manifest.string(), manifest_json(spec, records.size()));
    return kOk;
}

double ratio_detuning(const std::string& text, double& r) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        std::int64_t p = 0, q = 0;
        std::istringstream ps(text.substr(0, slash)), qs(text.substr(slash + 1));
        if ((ps >> p) && ps.eof() && (qs >> q) && qs.eof()) {
            r = static_cast<double>(p) / static_cast<double>(q);
            return commensurable_detuning(p, q);
        }
    }
    r = parse_ratio(text);
    return commensurable_detuning(r);
}

int cmd_calibrate(const RunConfig& cfg, std::ostream& out) {
    cfg.sim.validate();
    std::ostringstream os;
    if (!cfg.calibrate.ratios.empty()) {
        os << "ratio,delta_over_g,roundtrip_residual\n";
        for (const auto& text : cfg.calibrate.ratios) {
            double r = 0.0;
            const double d = ratio_detuning(text, r);
            os << text << ',' << format_double(d) << ',' << format_double(std::abs(rabi_ratio(d) - r)) << '\n';
        }
        emit(os.str(), cfg, out);
        return kOk;
    }

    MismatchOptions opts;
    opts.phase_correction = cfg.calibrate.phase_correction;
    std::vector<double> detunings = cfg.calibrate.detunings;
    if (detunings.empty()) detunings.push_back(cfg.sim.delta_over_g);

    os << "t,delta_over_g,residual\n";
    for (double d : detunings) {
        const PhysParams p = PhysParams::from_ratios(d, cfg.sim.g, cfg.sim.omega_c_over_g);
        auto rows = candidate_table(p, cfg.calibrate.t_min, cfg.calibrate.horizon, opts);
        if (cfg.calibrate.running_min) rows = running_minimum(std::move(rows));
        for (const auto& row : rows) {
            os << snap(row.t) << ',' << format_double(row.delta_over_g) << ',' << format_double(row.residual) << '\n';
        }
    }
    emit(os.str(), cfg, out);
    return kOk;
}

int cmd_optimize(const RunConfig& cfg, std::ostream& out) {
    cfg.sim.validate();
    const DensityMatrix input = sweep_input(cfg.sweep);
    const Optimum best = find_detuned_optimum(cfg.sim, cfg.optimize.search, input, cfg.sweep.workers);

    nlohmann::json j = {{"t", best.t}, {"delta_over_g", best.delta_over_g}, {"error", best.error}};
    if (!cfg.optimize.delta_offsets.empty() || !cfg.optimize.leaks.empty()) {
        const auto records = robustness_profile(cfg.sim, best, cfg.optimize.delta_offsets, cfg.optimize.leaks, input,
                                                cfg.sweep.workers);
        nlohmann::json offsets = nlohmann::json::array();
        nlohmann::json leaks = nlohmann::json::array();
        const std::size_t n_off = cfg.optimize.delta_offsets.size();
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            if (i < n_off) {
                offsets.push_back({{"offset", cfg.optimize.delta_offsets[i]}, {"error", r.error}});
            } else {
                leaks.push_back({{"ly_over_g", r.params.ly_over_g}, {"error", r.error}});
            }
        }
        j["profile"] = {{"delta_offsets", offsets}, {"leaks", leaks}};
    }
    const std::string text = j.dump(2) + "\n";
    out << text;
    if (!cfg.output.out.empty()) write_file_atomic(cfg.output.out, text);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const EnvLookup& env) {
    CLI::App app{"Cavity-QED C-Sign gate simulator", "csign"};
    app.set_version_flag("--version", version());
    app.require_subcommand(1);

    Flags flags;
    RunConfig extra;  // subcommand-specific flag targets

    auto* simulate = app.add_subcommand("simulate", "run the array once and print a JSON report");
    add_common(simulate, flags);
    simulate->add_flag("--include-matrices", extra.output.include_matrices, "include output density matrices");
    std::optional<std::string> diagnostics;
    simulate->add_option("--diagnostics", diagnostics, "write per-step trace/eigenvalue CSV here");

    auto* sweep = app.add_subcommand("sweep", "grid sweep to CSV plus manifest");
    add_common(sweep, flags);

    auto* calibrate = app.add_subcommand("calibrate", "analytic candidate table or commensurable detunings");
    add_common(calibrate, flags);
    std::optional<double> horizon, t_min;
    std::vector<std::string> ratios;
    std::vector<double> detunings;
    bool running_min = false, no_phase_correction = false;
    calibrate->add_option("--horizon", horizon, "largest t considered");
    calibrate->add_option("--t-min", t_min, "smallest t considered");
    calibrate->add_option("--ratio", ratios, "Omega_0/Omega_1 ratios (p/q or decimal); prints detunings");
    calibrate->add_option("--detuning", detunings, "delta/g values to tabulate");
    calibrate->add_flag("--running-min", running_min, "keep only running-minimum rows");
    calibrate->add_flag("--no-phase-correction", no_phase_correction, "rank without the phase shifter");

    auto* optimize = app.add_subcommand("optimize", "search (t, delta) for the lowest error");
    add_common(optimize, flags);
    std::vector<double> t_range, delta_range;
    std::optional<double> t_step, delta_step;
    optimize->add_option("--t-range", t_range, "t lo hi")->expected(2);
    optimize->add_option("--delta-range", delta_range, "delta/g lo hi")->expected(2);
    optimize->add_option("--t-step", t_step, "t grid step");
    optimize->add_option("--delta-step", delta_step, "delta/g grid step");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kParseError;
    }

    try {
        RunConfig cfg = default_config();
        if (!flags.config.empty()) cfg = load_config_file(flags.config, cfg);
        apply(env_overrides(env), cfg);
        apply(flags.o, cfg);

        if (simulate->parsed()) {
            if (extra.output.include_matrices) cfg.output.include_matrices = true;
            if (diagnostics) cfg.output.diagnostics = *diagnostics;
            return cmd_simulate(cfg, out);
        }
        if (sweep->parsed()) return cmd_sweep(cfg, out, err);
        if (calibrate->parsed()) {
            if (horizon) cfg.calibrate.horizon = *horizon;
            if (t_min) cfg.calibrate.t_min = *t_min;
            if (!ratios.empty()) cfg.calibrate.ratios = ratios;
            if (!detunings.empty()) cfg.calibrate.detunings = detunings;
            if (running_min) cfg.calibrate.running_min = true;
            if (no_phase_correction) cfg.calibrate.phase_correction = false;
            return cmd_calibrate(cfg, out);
        }
        if (optimize->parsed()) {
            auto& s = cfg.optimize.search;
            if (!t_range.empty()) std::tie(s.t_lo, s.t_hi) = std::pair{t_range[0], t_range[1]};
            if (!delta_range.empty()) std::tie(s.delta_lo, s.delta_hi) = std::pair{delta_range[0], delta_range[1]};
            if (t_step) s.t_step = *t_step;
            if (delta_step) s.delta_step = *delta_step;
            return cmd_optimize(cfg, out);
        }
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kParseError;
    } catch (const NumericalError& e) {
        err << "numerical error: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::logic_error& e) {
        err << "invalid parameters: " << e.what() << '\n';
        return kValidationError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIoError;
    }
    return kOk;
}

}  // namespace csign::cli
