#include "csign/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "csign/circuit.hpp"

namespace csign {

namespace {

Progression make_progression(double first, double step, double horizon) {
    Progression prog;
    prog.first = first;
    prog.step = step;
    for (std::size_t k = 0;; ++k) {
        const double time = first + static_cast<double>(k) * step;
        if (time > horizon * (1.0 + 1e-12)) break;
        prog.times.push_back(time);
    }
    return prog;
}

template <typename F>
std::pair<double, double> golden_section(F&& f, double lo, double hi, int iterations = 80) {
    constexpr double inv_phi = 0.6180339887498949;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = f(c);
    double fd = f(d);
    for (int i = 0; i < iterations && hi - lo > 1e-13; ++i) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = f(d);
        }
    }
    return fc < fd ? std::pair{c, fc} : std::pair{d, fd};
}

constexpr std::int64_t kMaxTerm = std::int64_t{1} << 29;

}  // namespace

ProgressionSet progressions(const PhysParams& p, double horizon) {
    p.validate();
    if (!(horizon > 0.0)) throw ValidationError("progression horizon must be positive");
    const double omega0 = rabi_frequency(0, p);
    const double omega1 = rabi_frequency(1, p);

    ProgressionSet set;
    if (p.delta == 0.0) {
        set.a.unconstrained = true;
    } else {
        const double step = 4.0 * kPi / std::abs(p.delta);
        set.a = make_progression(step, step, horizon);
    }
    set.b = make_progression(2.0 * kPi / omega0, 2.0 * kPi / omega0, horizon);
    set.c = make_progression(2.0 * kPi / omega1, 4.0 * kPi / omega1, horizon);
    return set;
}

double wrapped_distance(double angle) { return std::abs(std::remainder(angle, 2.0 * kPi)); }

bool check_nonlinearity(const PhaseTarget& phases, double tol) {
    return wrapped_distance(phases.a + phases.c - 2.0 * phases.b) > tol;
}

SectorResponse sector_response(double duration, const PhysParams& p) {
    const CavityAmplitudes vac = analytic_evolve(1.0, 0.0, 0.0, duration, p);
    const CavityAmplitudes one = analytic_evolve(0.0, 1.0, 0.0, duration, p);
    const CavityAmplitudes two = analytic_evolve(0.0, 0.0, 1.0, duration, p);
    SectorResponse r;
    r.phases.a = 0.0;
    r.phases.b = std::arg(one.g1 / vac.g0);
    r.phases.c = std::arg(two.g2 / vac.g0);
    r.excitation1 = std::abs(one.e0);
    r.excitation2 = std::abs(two.e1);
    return r;
}

double mismatch(double duration, const PhysParams& p, const MismatchOptions& opts) {
    const SectorResponse r = sector_response(duration, p);
    double phase = 0.0;
    if (opts.phase_correction) {
        // Shifting by -b per photon leaves c - 2b on the two-photon state.
        phase = wrapped_distance(r.phases.c - 2.0 * r.phases.b - kPi);
    } else {
        phase = std::max(wrapped_distance(r.phases.b), wrapped_distance(r.phases.c - kPi));
    }
    const double excitation = std::max(r.excitation1, r.excitation2);
    return opts.phase_weight * phase + opts.excitation_weight * excitation;
}

double exact_ns_residual(double duration, const PhysParams& p) {
    const SectorResponse r = sector_response(duration, p);
    return std::max({r.excitation1, r.excitation2, wrapped_distance(r.phases.b),
                     wrapped_distance(r.phases.c - kPi)});
}

TauResult best_tau(const PhysParams& p, double t_min, double t_max, const MismatchOptions& opts, TauSearch search,
                   double grid_step) {
    p.validate();
    if (!(grid_step > 0.0)) throw ValidationError("grid step must be positive");
    if (!(t_max >= t_min)) throw ValidationError("best_tau needs t_max >= t_min");

    if (search == TauSearch::progression) {
        TauResult best;
        best.residual = std::numeric_limits<double>::infinity();
        for (const auto& row : candidate_table(p, t_min, t_max, opts)) {
            if (row.residual < best.residual) best = {row.t, duration_from_t(row.t, p.g), row.residual};
        }
        return best;
    }

    const auto f = [&](double t) { return mismatch(duration_from_t(t, p.g), p, opts); };
    std::vector<double> grid;
    for (std::size_t k = 0;; ++k) {
        const double t = t_min + static_cast<double>(k) * grid_step;
        if (t > t_max + 1e-12) break;
        grid.push_back(t);
    }
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) values[i] = f(grid[i]);

    TauResult best;
    best.residual = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (values[i] < best.residual) best = {grid[i], 0.0, values[i]};
    }
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        if (values[i] <= values[i - 1] && values[i] <= values[i + 1]) {
            const auto [t, v] = golden_section(f, grid[i - 1], grid[i + 1]);
            if (v < best.residual) best = {t, 0.0, v};
        }
    }
    best.duration = duration_from_t(best.t, p.g);
    return best;
}

std::vector<Candidate> candidate_table(const PhysParams& p, double t_min, double t_max, const MismatchOptions& opts) {
    p.validate();
    std::vector<Candidate> rows;
    if (!(t_max > 0.0) || t_max < t_min) return rows;
    const ProgressionSet set = progressions(p, duration_from_t(t_max, p.g));
    for (const double time : set.c.times) {
        const double t = t_from_duration(time, p.g);
        if (t < t_min - 1e-9) continue;
        rows.push_back({t, p.delta / p.g, mismatch(time, p, opts)});
    }
    return rows;
}

std::vector<Candidate> running_minimum(std::vector<Candidate> rows) {
    std::stable_sort(rows.begin(), rows.end(), [](const Candidate& a, const Candidate& b) { return a.t < b.t; });
    std::vector<Candidate> kept;
    for (const auto& row : rows) {
        if (kept.empty() || row.residual < kept.back().residual) kept.push_back(row);
    }
    return kept;
}

double rabi_ratio(double d) { return std::sqrt(4.0 + d * d) / std::sqrt(8.0 + d * d); }

double commensurable_detuning(double r) {
    if (!(r > 1.0 / std::sqrt(2.0)) || !(r < 1.0)) {
        throw std::domain_error("ratio must lie in (1/sqrt2, 1), got " + std::to_string(r));
    }
    return std::sqrt((8.0 * r * r - 4.0) / (1.0 - r * r));
}

double commensurable_detuning(std::int64_t num, std::int64_t den) {
    if (num <= 0 || den <= 0) throw std::domain_error("ratio terms must be positive");
    if (num > kMaxTerm || den > kMaxTerm) throw std::domain_error("ratio terms too large");
    // 1/sqrt2 < p/q < 1  <=>  q^2 < 2 p^2 and p < q, checked exactly.
    const std::int64_t p2 = num * num;
    const std::int64_t q2 = den * den;
    if (!(q2 < 2 * p2) || !(num < den)) throw std::domain_error("ratio must lie in (1/sqrt2, 1)");
    const double d2 = static_cast<double>(8 * p2 - 4 * q2) / static_cast<double>(q2 - p2);
    return std::sqrt(d2);
}

double parse_ratio(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return std::stod(text);
        return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
    } catch (const std::logic_error&) {
        throw ValidationError("cannot parse ratio '" + text + "'");
    }
}

}  // namespace csign
