#include "csign/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace csign {

namespace {

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(a)); }

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
    const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

void set_param(SimParams& p, SweepParam param, double value) {
    switch (param) {
        case SweepParam::t: p.t = value; break;
        case SweepParam::delta_over_g: p.delta_over_g = value; break;
        case SweepParam::ly_over_g: p.ly_over_g = value; break;
        case SweepParam::phs: p.phs = static_cast<int>(std::lround(value)); break;
    }
}

SweepRecord evaluate(const DensityMatrix& input, const SimParams& params, std::size_t index, bool timing) {
    SweepRecord rec;
    rec.index = index;
    rec.params = params;
    const auto start = std::chrono::steady_clock::now();
    try {
        const GateReport report = run_array(input, params);
        rec.error = report.error;
        rec.trace_drift = report.trace_drift;
        rec.atom_residual = report.atom_residual;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.failure = e.what();
        rec.error = std::numeric_limits<double>::quiet_NaN();
    }
    if (timing) {
        rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    return rec;
}

std::vector<SweepRecord> evaluate_all(const DensityMatrix& input, const std::vector<SimParams>& points,
                                      unsigned workers, bool timing) {
    std::vector<SweepRecord> out(points.size());
    parallel_for(points.size(), workers, [&](std::size_t i) { out[i] = evaluate(input, points[i], i, timing); });
    return out;
}

double objective(const DensityMatrix& input, SimParams p, double t, double d) {
    p.t = t;
    p.delta_over_g = d;
    try {
        return run_array(input, p).error;
    } catch (const std::exception&) {
        return std::numeric_limits<double>::infinity();
    }
}

}  // namespace

std::string to_string(SweepParam param) {
    switch (param) {
        case SweepParam::t: return "t";
        case SweepParam::delta_over_g: return "delta_over_g";
        case SweepParam::ly_over_g: return "ly_over_g";
        case SweepParam::phs: return "phs";
    }
    return "?";
}

SweepParam parse_sweep_param(const std::string& name) {
    for (auto p : {SweepParam::t, SweepParam::delta_over_g, SweepParam::ly_over_g, SweepParam::phs}) {
        if (to_string(p) == name) return p;
    }
    throw ValidationError("unknown sweep parameter '" + name + "'");
}

std::vector<double> Axis::values() const {
    std::vector<double> v;
    if (log_points > 0) {
        if (!(start > 0.0) || !(stop > 0.0)) throw ValidationError("log axis needs positive bounds");
        if (stop >= start) {
            const double decades = std::log10(stop / start);
            const auto n = static_cast<long>(std::floor(decades * log_points + 1e-9));
            for (long k = 0; k <= n; ++k) v.push_back(start * std::pow(10.0, static_cast<double>(k) / log_points));
        }
    } else if (stop >= start) {
        if (step < 0.0 || (step == 0.0 && stop != start)) throw ValidationError("axis step must be positive");
        const long n = step == 0.0 ? 0 : static_cast<long>(std::floor((stop - start) / step + 1e-9));
        for (long k = 0; k <= n; ++k) {
            double x = start + static_cast<double>(k) * step;
            if (std::abs(x - std::round(x)) < 1e-9) x = std::round(x);
            v.push_back(x);
        }
    }
    if (v.empty()) return v;  // an empty range stays empty
    v.insert(v.end(), extra.begin(), extra.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end(), close), v.end());
    return v;
}

void SweepSpec::validate() const {
    if (axes.size() > 2) throw ValidationError("at most two swept axes");
    if (axes.size() == 2 && axes[0].param == axes[1].param) throw ValidationError("axes must differ");
    if (workers == 0) throw ValidationError("workers must be >= 1");
    fixed.validate();
    for (const auto& axis : axes) {
        for (double x : axis.values()) {
            switch (axis.param) {
                case SweepParam::t:
                    if (x < 0.0 || x > 200.0) throw ValidationError("t outside [0, 200]");
                    break;
                case SweepParam::delta_over_g:
                    if (x < -10.0 || x > 10.0) throw ValidationError("delta_over_g outside [-10, 10]");
                    break;
                case SweepParam::ly_over_g:
                    if (x < 0.0 || x > 1.0) throw ValidationError("ly_over_g outside [0, 1]");
                    break;
                case SweepParam::phs:
                    if (x != 0.0 && x != 1.0) throw ValidationError("phs values must be 0 or 1");
                    break;
            }
        }
    }
}

std::size_t SweepSpec::size() const {
    std::size_t n = 1;
    for (const auto& axis : axes) n *= axis.values().size();
    return n;
}

SimParams SweepSpec::point(std::size_t i) const {
    SimParams p = fixed;
    std::size_t rest = i;
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
        const auto vals = it->values();
        set_param(p, it->param, vals.at(rest % vals.size()));
        rest /= vals.size();
    }
    return p;
}

DensityMatrix sweep_input(const SweepSpec& spec) {
    return spec.input == InputKind::p_test ? p_test(array_space()) : random_valid_input(array_space(), spec.seed);
}

std::vector<SweepRecord> run_sweep(const SweepSpec& spec) {
    spec.validate();
    const std::size_t n = spec.size();
    if (n == 0) return {};
    std::vector<SimParams> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) points.push_back(spec.point(i));
    return evaluate_all(sweep_input(spec), points, spec.workers, spec.record_timing);
}

std::vector<OptimalEntry> extract_optimal_set(std::vector<SweepRecord> records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const SweepRecord& a, const SweepRecord& b) { return a.params.t < b.params.t; });
    std::vector<OptimalEntry> kept;
    for (const auto& r : records) {
        if (!r.ok) continue;
        if (kept.empty() || r.error < kept.back().error) kept.push_back({r.params.t, r.params.delta_over_g, r.error});
    }
    return kept;
}

Optimum find_detuned_optimum(const SimParams& base, const OptimumSearch& s, const DensityMatrix& input,
                             unsigned workers) {
    const Axis t_axis{SweepParam::t, s.t_lo, s.t_hi, s.t_step, 0, {}};
    const Axis d_axis{SweepParam::delta_over_g, s.delta_lo, s.delta_hi, s.delta_step, 0, {}};
    const auto ts = t_axis.values();
    const auto ds = d_axis.values();
    if (ts.empty() || ds.empty()) throw ValidationError("empty optimum search range");

    std::vector<SimParams> points;
    for (double t : ts) {
        for (double d : ds) {
            SimParams p = base;
            p.t = t;
            p.delta_over_g = d;
            points.push_back(p);
        }
    }
    const auto grid = evaluate_all(input, points, workers, false);
    const auto at = [&](std::size_t i, std::size_t j) {
        const double e = grid[i * ds.size() + j].error;
        return std::isnan(e) ? std::numeric_limits<double>::infinity() : e;
    };

    // Grid local minima over the 8-neighbourhood.
    std::vector<std::pair<double, std::pair<std::size_t, std::size_t>>> minima;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = 0; j < ds.size(); ++j) {
            bool is_min = true;
            for (int di = -1; di <= 1 && is_min; ++di) {
                for (int dj = -1; dj <= 1; ++dj) {
                    const auto ii = static_cast<long>(i) + di;
                    const auto jj = static_cast<long>(j) + dj;
                    if ((di == 0 && dj == 0) || ii < 0 || jj < 0 || ii >= static_cast<long>(ts.size()) ||
                        jj >= static_cast<long>(ds.size())) {
                        continue;
                    }
                    if (at(static_cast<std::size_t>(ii), static_cast<std::size_t>(jj)) < at(i, j)) {
                        is_min = false;
                        break;
                    }
                }
            }
            if (is_min) minima.push_back({at(i, j), {i, j}});
        }
    }
    std::stable_sort(minima.begin(), minima.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    if (minima.size() > s.starts) minima.resize(std::max<std::size_t>(s.starts, 1));

    std::vector<Optimum> refined(minima.size());
    parallel_for(minima.size(), workers, [&](std::size_t k) {
        const auto [i, j] = minima[k].second;
        Optimum cur{ts[i], ds[j], minima[k].first};
        double ht = s.t_step;
        double hd = s.delta_step;
        for (int round = 0; round < s.rounds; ++round) {
            const double span_t = ht;
            const double span_d = hd;
            ht /= 10.0;
            hd /= 10.0;
            for (int axis = 0; axis < 2; ++axis) {
                const bool on_t = axis == 0;
                const double h = on_t ? ht : hd;
                const double span = on_t ? span_t : span_d;
                const double lo = on_t ? s.t_lo : s.delta_lo;
                const double hi = on_t ? s.t_hi : s.delta_hi;
                if (!(h > 0.0) || hi <= lo) continue;
                const double centre = on_t ? cur.t : cur.delta_over_g;
                for (int m = -static_cast<int>(std::lround(span / h)); m <= std::lround(span / h); ++m) {
                    const double x = std::clamp(centre + m * h, lo, hi);
                    const double tt = on_t ? x : cur.t;
                    const double dd = on_t ? cur.delta_over_g : x;
                    const double e = objective(input, base, tt, dd);
                    if (e < cur.error) cur = {tt, dd, e};
                }
            }
        }
        refined[k] = cur;
    });

    Optimum best{ts.front(), ds.front(), std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = 0; j < ds.size(); ++j) {
            if (at(i, j) < best.error) best = {ts[i], ds[j], at(i, j)};
        }
    }
    for (const auto& r : refined) {
        if (r.error < best.error) best = r;
    }
    return best;
}

std::vector<SweepRecord> robustness_profile(const SimParams& base, const Optimum& optimum,
                                            const std::vector<double>& delta_offsets,
                                            const std::vector<double>& leaks, const DensityMatrix& input,
                                            unsigned workers) {
    std::vector<SimParams> points;
    SimParams p = base;
    p.t = optimum.t;
    for (double off : delta_offsets) {
        p.delta_over_g = optimum.delta_over_g + off;
        points.push_back(p);
    }
    p.delta_over_g = optimum.delta_over_g;
    for (double leak : leaks) {
        p.ly_over_g = leak;
        points.push_back(p);
    }
    return evaluate_all(input, points, workers, false);
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
    std::ostringstream os;
    os << "t,delta_over_g,ly_over_g,phs,error,trace_drift,wall_ms\n";
    for (const auto& r : records) {
        os << format_double(r.params.t) << ',' << format_double(r.params.delta_over_g) << ','
           << format_double(r.params.ly_over_g) << ',' << r.params.phs << ','
           << (r.ok ? format_double(r.error) : std::string("nan")) << ',' << format_double(r.trace_drift) << ','
           << format_double(r.wall_ms) << '\n';
    }
    return os.str();
}

namespace {

nlohmann::json spec_to_json(const SweepSpec& spec, bool with_runtime) {
    nlohmann::json axes = nlohmann::json::array();
    for (const auto& a : spec.axes) {
        axes.push_back({{"param", to_string(a.param)},
                        {"start", a.start},
                        {"stop", a.stop},
                        {"step", a.step},
                        {"log_points", a.log_points},
                        {"extra", a.extra}});
    }
    const SimParams& f = spec.fixed;
    nlohmann::json j = {
        {"axes", axes},
        {"fixed",
         {{"t", f.t},
          {"delta_over_g", f.delta_over_g},
          {"ly_over_g", f.ly_over_g},
          {"phs", f.phs},
          {"g", f.g},
          {"omega_c_over_g", f.omega_c_over_g},
          {"atom_decay_over_g", f.atom_decay_over_g},
          {"steps", f.steps},
          {"frame", to_string(f.frame)},
          {"error_basis", to_string(f.error_basis)},
          {"ns_stage", to_string(f.ns_stage)}}},
        {"input", spec.input == InputKind::p_test ? "p_test" : "random"},
        {"seed", spec.seed},
    };
    if (with_runtime) {
        j["workers"] = spec.workers;
        j["record_timing"] = spec.record_timing;
    }
    return j;
}

}  // namespace

std::string spec_json(const SweepSpec& spec) { return spec_to_json(spec, true).dump(2); }

std::string spec_hash(const SweepSpec& spec) {
    // Worker count and timing do not change results, so they stay out of the hash.
    const std::string text = spec_to_json(spec, false).dump();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string manifest_json(const SweepSpec& spec, std::size_t rows) {
    nlohmann::json j = {
        {"engine", "csign"},
        {"version", version()},
        {"spec", spec_to_json(spec, true)},
        {"spec_hash", spec_hash(spec)},
        {"rows", rows},
        {"state_dimension", array_space().dimension()},
    };
    return j.dump(2) + "\n";
}

}  // namespace csign
