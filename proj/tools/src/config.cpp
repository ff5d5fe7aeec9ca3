#include "csign_cli/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace csign::cli {

namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were consumed.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + " must be an object");
    }
    ~Section() = default;

    bool has(const std::string& key) {
        seen_.insert(key);
        return j_.contains(key);
    }

    template <typename T>
    void read(const std::string& key, T& target) {
        if (!has(key)) return;
        target = convert<T>(j_.at(key), join(key));
    }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        return j_.at(key);
    }

    std::string join(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& [key, value] : j_.items()) {
            if (!seen_.count(key)) throw ConfigError("unknown config key '" + join(key) + "'");
        }
    }

    template <typename T>
    static T convert(const json& v, const std::string& key) {
        if constexpr (std::is_same_v<T, bool>) {
            if (!v.is_boolean()) throw ConfigError("config key '" + key + "' must be a boolean");
            return v.get<bool>();
        } else if constexpr (std::is_same_v<T, std::string>) {
            if (!v.is_string()) throw ConfigError("config key '" + key + "' must be a string");
            return v.get<std::string>();
        } else if constexpr (std::is_integral_v<T>) {
            if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
            if (std::is_unsigned_v<T> && v.get<long long>() < 0 && !v.is_number_unsigned()) {
                throw ConfigError("config key '" + key + "' must be non-negative");
            }
            return v.get<T>();
        } else if constexpr (std::is_floating_point_v<T>) {
            if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
            return v.get<T>();
        } else {
            if (!v.is_array()) throw ConfigError("config key '" + key + "' must be an array");
            T out;
            for (std::size_t i = 0; i < v.size(); ++i) {
                out.push_back(convert<typename T::value_type>(v[i], key + "[" + std::to_string(i) + "]"));
            }
            return out;
        }
    }

private:
    std::string where() const { return path_.empty() ? "config" : "config key '" + path_ + "'"; }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename E>
E parse_enum(const std::string& key, const std::string& value, std::initializer_list<std::pair<const char*, E>> opts) {
    for (const auto& [name, e] : opts) {
        if (value == name) return e;
    }
    throw ConfigError("config key '" + key + "' has unknown value '" + value + "'");
}

void read_range(Section& s, const std::string& key, double& lo, double& hi) {
    if (!s.has(key)) return;
    const auto v = Section::convert<std::vector<double>>(s.raw(key), s.join(key));
    if (v.size() != 2) throw ConfigError("config key '" + s.join(key) + "' must be [lo, hi]");
    lo = v[0];
    hi = v[1];
}

template <typename T>
std::optional<T> env_number(const EnvLookup& env, const std::string& name) {
    const auto raw = env(name);
    if (!raw) return std::nullopt;
    std::istringstream is(*raw);
    T value{};
    is >> value;
    if (!is || !is.eof()) throw ConfigError("environment variable " + name + " is not a valid number: '" + *raw + "'");
    return value;
}

}  // namespace

RunConfig default_config() {
    RunConfig cfg;
    cfg.sweep.workers = std::max(1u, std::thread::hardware_concurrency());
    return cfg;
}

RunConfig parse_config(const std::string& text, RunConfig cfg) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    Section top(root, "");

    if (top.has("physics")) {
        Section s(top.raw("physics"), "physics");
        SimParams& p = cfg.sim;
        s.read("t", p.t);
        s.read("delta_over_g", p.delta_over_g);
        s.read("ly_over_g", p.ly_over_g);
        s.read("phs", p.phs);
        s.read("g", p.g);
        s.read("omega_c_over_g", p.omega_c_over_g);
        s.read("atom_decay_over_g", p.atom_decay_over_g);
        std::string text_value;
        if (s.has("frame")) {
            text_value = Section::convert<std::string>(s.raw("frame"), "physics.frame");
            p.frame = parse_enum<Frame>("physics.frame", text_value, {{"rotating", Frame::rotating}, {"lab", Frame::lab}});
        }
        if (s.has("error_basis")) {
            text_value = Section::convert<std::string>(s.raw("error_basis"), "physics.error_basis");
            p.error_basis = parse_enum<ErrorBasis>("physics.error_basis", text_value,
                                                   {{"full", ErrorBasis::full}, {"photonic", ErrorBasis::photonic}});
        }
        if (s.has("ns_stage")) {
            text_value = Section::convert<std::string>(s.raw("ns_stage"), "physics.ns_stage");
            p.ns_stage =
                parse_enum<NsStage>("physics.ns_stage", text_value, {{"cavity", NsStage::cavity}, {"ideal", NsStage::ideal}});
        }
        s.finish();
    }

    if (top.has("stepper")) {
        Section s(top.raw("stepper"), "stepper");
        s.read("steps", cfg.sim.steps);
        s.read("max_trace_drift", cfg.sim.stepper.max_trace_drift);
        s.read("renormalize", cfg.sim.stepper.renormalize);
        s.read("diagnostics_every", cfg.sim.stepper.diagnostics_every);
        s.read("exact_closed", cfg.sim.stepper.exact_closed);
        s.finish();
    }

    if (top.has("sweep")) {
        Section s(top.raw("sweep"), "sweep");
        if (s.has("axes")) {
            const json& axes = s.raw("axes");
            if (!axes.is_array()) throw ConfigError("config key 'sweep.axes' must be an array");
            cfg.sweep.axes.clear();
            for (std::size_t i = 0; i < axes.size(); ++i) {
                Section a(axes[i], "sweep.axes[" + std::to_string(i) + "]");
                Axis axis;
                std::string name;
                if (!a.has("param")) throw ConfigError("config key '" + a.join("param") + "' is required");
                a.read("param", name);
                try {
                    axis.param = parse_sweep_param(name);
                } catch (const ValidationError& e) {
                    throw ConfigError("config key '" + a.join("param") + "': " + e.what());
                }
                a.read("start", axis.start);
                a.read("stop", axis.stop);
                a.read("step", axis.step);
                a.read("log_points", axis.log_points);
                a.read("extra", axis.extra);
                a.finish();
                cfg.sweep.axes.push_back(axis);
            }
        }
        if (s.has("input")) {
            const auto v = Section::convert<std::string>(s.raw("input"), "sweep.input");
            cfg.sweep.input =
                parse_enum<InputKind>("sweep.input", v, {{"p_test", InputKind::p_test}, {"random", InputKind::random}});
        }
        s.read("seed", cfg.sweep.seed);
        s.read("workers", cfg.sweep.workers);
        s.read("record_timing", cfg.sweep.record_timing);
        s.finish();
    }

    if (top.has("calibrate")) {
        Section s(top.raw("calibrate"), "calibrate");
        s.read("t_min", cfg.calibrate.t_min);
        s.read("horizon", cfg.calibrate.horizon);
        s.read("detunings", cfg.calibrate.detunings);
        s.read("ratios", cfg.calibrate.ratios);
        s.read("running_min", cfg.calibrate.running_min);
        s.read("phase_correction", cfg.calibrate.phase_correction);
        s.finish();
    }

    if (top.has("optimize")) {
        Section s(top.raw("optimize"), "optimize");
        OptimumSearch& o = cfg.optimize.search;
        read_range(s, "t_range", o.t_lo, o.t_hi);
        read_range(s, "delta_range", o.delta_lo, o.delta_hi);
        s.read("t_step", o.t_step);
        s.read("delta_step", o.delta_step);
        s.read("rounds", o.rounds);
        s.read("starts", o.starts);
        s.read("delta_offsets", cfg.optimize.delta_offsets);
        s.read("leaks", cfg.optimize.leaks);
        s.finish();
    }

    if (top.has("output")) {
        Section s(top.raw("output"), "output");
        s.read("out", cfg.output.out);
        s.read("diagnostics", cfg.output.diagnostics);
        s.read("include_matrices", cfg.output.include_matrices);
        s.finish();
    }

    top.finish();
    return cfg;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), std::move(base));
}

EnvLookup process_env() {
    return [](const std::string& name) -> std::optional<std::string> {
        const char* v = std::getenv(name.c_str());
        if (!v) return std::nullopt;
        return std::string(v);
    };
}

Overrides env_overrides(const EnvLookup& env) {
    Overrides o;
    o.t = env_number<double>(env, "CSIGN_T");
    o.delta_over_g = env_number<double>(env, "CSIGN_DELTA_OVER_G");
    o.ly_over_g = env_number<double>(env, "CSIGN_LY_OVER_G");
    o.phs = env_number<int>(env, "CSIGN_PHS");
    o.dt_steps = env_number<long long>(env, "CSIGN_DT_STEPS");
    o.workers = env_number<long long>(env, "CSIGN_WORKERS");
    o.seed = env_number<unsigned long long>(env, "CSIGN_SEED");
    o.out = env("CSIGN_OUT");
    return o;
}

void apply(const Overrides& o, RunConfig& cfg) {
    if (o.t) cfg.sim.t = *o.t;
    if (o.delta_over_g) cfg.sim.delta_over_g = *o.delta_over_g;
    if (o.ly_over_g) cfg.sim.ly_over_g = *o.ly_over_g;
    if (o.phs) cfg.sim.phs = *o.phs;
    if (o.dt_steps) {
        if (*o.dt_steps < 1) throw ValidationError("dt-steps must be >= 1");
        cfg.sim.steps = static_cast<std::size_t>(*o.dt_steps);
    }
    if (o.workers) {
        if (*o.workers < 1) throw ValidationError("workers must be >= 1");
        cfg.sweep.workers = static_cast<unsigned>(*o.workers);
    }
    if (o.seed) cfg.sweep.seed = *o.seed;
    if (o.out) cfg.output.out = *o.out;
}

}  // namespace csign::cli
