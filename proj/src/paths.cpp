#include "nld/paths.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "nld/error.hpp"

namespace nld {

void PathConfig::validate() const {
    if (!(dt_min > 0.0) || !(dt_min <= dt_base)) throw ParameterError("path config requires 0 < dt_min <= dt_base");
    if (!(horizon > 0.0)) throw ParameterError("path config requires horizon > 0");
    if (!(touch_eps > 0.0)) throw ParameterError("path config requires touch_eps > 0");
    if (!(jump_threshold > 0.0)) throw ParameterError("path config requires jump_threshold > 0");
}

PathConfig PathConfig::defaults_for(const Domain& domain, const StableLaw& law, double touch_eps) {
    PathConfig cfg;
    cfg.touch_eps = touch_eps;
    cfg.jump_threshold = 10.0 * touch_eps;
    cfg.horizon = domain.bounded() ? 50.0 * std::pow(domain.diameter(), law.alpha()) : 50.0;
    cfg.adaptive = domain.bounded();
    return cfg;
}

const char* to_string(ExitKind kind) {
    switch (kind) {
        case ExitKind::Jump: return "Jump";
        case ExitKind::DriftCross: return "DriftCross";
        case ExitKind::Censored: return "Censored";
    }
    return "?";
}

StepResult step(std::span<const double> x, double dt, const Drift& drift, const StableLaw& law,
                RngStream& stream, bool suppress_jumps) {
    if (!(dt > 0.0)) throw ParameterError("time step must be positive");
    const std::size_t dim = x.size();
    if (static_cast<int>(dim) != law.dim() || drift.dim() != law.dim()) {
        throw ParameterError("state, drift and law dimensions must agree");
    }
    StepResult r{Point(dim), Point(dim), Point(dim, 0.0)};
    drift.eval(x, r.drift_part);
    for (double& v : r.drift_part) v *= dt;
    if (!suppress_jumps) {
        if (dim == 1) {
            r.jump_part[0] = sample_sym_stable_1d(law.alpha(), dt, stream);
        } else {
            sample_isotropic_increment(law, dt, stream, r.jump_part);
        }
    }
    for (std::size_t i = 0; i < dim; ++i) r.next[i] = x[i] + r.drift_part[i] + r.jump_part[i];
    return r;
}

void PathTrace::write_csv(std::ostream& out) const {
    const std::size_t dim = rows.empty() ? 1 : rows.front().x.size();
    out << "t";
    for (std::size_t i = 1; i <= dim; ++i) out << ",x" << i;
    out << ",dt,jump\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf;
    };
    for (const auto& row : rows) {
        put(row.t);
        for (double c : row.x) {
            out << ',';
            put(c);
        }
        out << ',';
        put(row.dt);
        out << ',';
        put(row.jump);
        out << '\n';
    }
}

namespace {

/// Shared stepping loop. `stops` are increasing times at which the walk must
/// land exactly; `on_step(t0, x0, t1, x1)` sees every completed step including
/// the exit step; `on_stop(k, x)` fires when stop k is reached inside D.
template <class OnStep, class OnStop>
ExitRecord walk(std::span<const double> x0, const Domain& domain, const Drift& drift, const StableLaw& law,
                const PathConfig& cfg, RngStream& stream, double t_end, std::span<const double> stops,
                OnStep&& on_step, OnStop&& on_stop, PathTrace* trace) {
    cfg.validate();
    const int dim = law.dim();
    if (static_cast<int>(x0.size()) != dim || domain.dim() != dim || drift.dim() != dim) {
        throw ParameterError("start point, domain, drift and law dimensions must agree");
    }
    double dist = domain.signed_distance(x0);
    if (!(dist > 0.0)) throw ParameterError("start point must lie in D");
    if (cfg.adaptive && !domain.bounded()) throw ParameterError("adaptive stepping needs a bounded domain");
    const double d_ref = cfg.adaptive ? 0.25 * domain.diameter() : 0.0;
    const double alpha = law.alpha();

    Point x(x0.begin(), x0.end()), xn(dim), bx(dim), dz(dim);
    double t = 0.0;
    std::size_t next_stop = 0;
    ExitRecord rec;
    if (trace) trace->rows.push_back({0.0, x, 0.0, 0.0});

    while (next_stop < stops.size() && stops[next_stop] <= t) on_stop(next_stop++, std::span<const double>(x));
    if (t >= t_end) {
        rec.tau = t_end;
        rec.x_pre = x;
        rec.x_exit = x;
        rec.touched_boundary = dist <= cfg.touch_eps;
        return rec;
    }

    while (true) {
        double dt = cfg.dt_base;
        if (cfg.adaptive) dt = std::clamp(cfg.dt_base * dist / d_ref, cfg.dt_min, cfg.dt_base);
        double target = t_end;
        if (next_stop < stops.size()) target = std::min(target, stops[next_stop]);
        bool lands = false;
        if (t + dt >= target) {
            dt = target - t;
            lands = true;
        }

        drift.eval(x, bx);
        double jump_sq = 0.0;
        if (dim == 1) {
            dz[0] = sample_sym_stable_1d(alpha, dt, stream);
            jump_sq = dz[0] * dz[0];
        } else {
            sample_isotropic_increment(law, dt, stream, dz);
            for (double c : dz) jump_sq += c * c;
        }
        for (int i = 0; i < dim; ++i) xn[i] = x[i] + bx[i] * dt + dz[i];
        const double t_new = lands ? target : t + dt;
        const double jump = std::sqrt(jump_sq);
        ++rec.steps;
        const double dist_new = domain.signed_distance(xn);
        on_step(t, std::span<const double>(x), t_new, std::span<const double>(xn));
        if (trace) trace->rows.push_back({t_new, xn, dt, jump});

        if (dist_new <= 0.0) {
            rec.tau = t_new;
            rec.x_pre = x;
            rec.x_exit = xn;
            rec.exit_jump = jump;
            rec.touched_boundary = -dist_new <= cfg.touch_eps;
            rec.exit_kind = jump <= cfg.jump_threshold ? ExitKind::DriftCross : ExitKind::Jump;
            return rec;
        }
        t = t_new;
        dist = dist_new;
        std::swap(x, xn);
        if (lands) {
            while (next_stop < stops.size() && stops[next_stop] <= t) on_stop(next_stop++, std::span<const double>(x));
            if (t >= t_end) {
                rec.tau = t_end;
                rec.x_pre = xn;  // swapped: xn holds the previous state
                rec.x_exit = x;
                rec.exit_jump = jump;
                rec.exit_kind = ExitKind::Censored;
                rec.touched_boundary = dist <= cfg.touch_eps;
                return rec;
            }
        }
    }
}

}  // namespace

ExitRecord simulate_until_exit(std::span<const double> x0, const Domain& domain, const Drift& drift,
                               const StableLaw& law, const PathConfig& cfg, RngStream& stream, PathTrace* trace) {
    return walk(
        x0, domain, drift, law, cfg, stream, cfg.horizon, {}, [](double, auto, double, auto) {},
        [](std::size_t, auto) {}, trace);
}

ExitRecord simulate_until_exit(std::span<const double> x0, const ProblemSpec& problem, const PathConfig& cfg,
                               RngStream& stream, PathTrace* trace) {
    return simulate_until_exit(x0, problem.domain, problem.drift, problem.law, cfg, stream, trace);
}

std::vector<PathFunctionalSample> simulate_values(std::span<const double> x0, std::span<const double> times,
                                                  const ProblemSpec& problem, const PathConfig& cfg,
                                                  RngStream& stream) {
    if (times.empty()) return {};
    for (std::size_t k = 0; k < times.size(); ++k) {
        if (!(times[k] >= 0.0) || (k > 0 && times[k] < times[k - 1])) {
            throw ParameterError("evaluation times must be non-negative and increasing");
        }
    }
    if (times.back() > cfg.horizon) throw ParameterError("evaluation time exceeds the censoring horizon");

    const DataFunction& f = problem.f;
    const Domain& domain = problem.domain;
    const bool has_source = !f.is_zero();
    const bool exp_weight = f.time_factor() == DataFunction::TimeFactor::Exp;
    const double lambda = f.decay_rate();
    // f(t-s, x) = h(t) w(s) g(x) with w(s) = 1 or exp(lambda s); accumulate int w g ds.
    auto weight = [&](double s) { return exp_weight ? std::exp(lambda * s) : 1.0; };

    std::vector<PathFunctionalSample> out(times.size());
    double integral = 0.0;
    double g_prev = has_source ? f.space(x0, domain) : 0.0;

    auto on_step = [&](double t0, std::span<const double>, double t1, std::span<const double> x1) {
        if (!has_source) return;
        const double g_next = f.space(x1, domain);
        integral += 0.5 * (weight(t0) * g_prev + weight(t1) * g_next) * (t1 - t0);
        g_prev = g_next;
    };
    auto on_stop = [&](std::size_t k, std::span<const double> x) {
        out[k].survived = true;
        out[k].phi_term = problem.initial_value(x);
        out[k].running_term = f.time(times[k]) * integral;
    };
    const ExitRecord rec =
        walk(x0, domain, problem.drift, problem.law, cfg, stream, times.back(), times, on_step, on_stop, nullptr);
    if (rec.exit_kind != ExitKind::Censored) {
        for (std::size_t k = 0; k < times.size(); ++k) {
            if (times[k] >= rec.tau) {
                out[k].survived = false;
                out[k].phi_term = 0.0;
                out[k].running_term = f.time(times[k]) * integral;
            }
        }
    }
    return out;
}

PathFunctionalSample simulate_value(std::span<const double> x0, double t, const ProblemSpec& problem,
                                    const PathConfig& cfg, RngStream& stream) {
    const double times[1] = {t};
    return simulate_values(x0, times, problem, cfg, stream).front();
}

}  // namespace nld
