#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "nld/domain.hpp"
#include "nld/problem.hpp"
#include "nld/rng.hpp"
#include "nld/stable.hpp"

namespace nld {

/// Time-stepping controls for dX = b(X) dt + dZ.
struct PathConfig {
    double dt_base = 1e-3;
    double dt_min = 1e-5;
    /// dt = clamp(dt_base * d_x / d_ref, dt_min, dt_base) with d_ref = diam(D)/4.
    bool adaptive = true;
    /// Censoring time; paths alive at the horizon are recorded as censored.
    double horizon = 50.0;
    double touch_eps = 1e-3;
    /// Exit steps whose jump part is at most this are drift crossings.
    double jump_threshold = 1e-2;

    void validate() const;

    /// Defaults with horizon 50 diam(D)^alpha and jump_threshold 10 touch_eps.
    static PathConfig defaults_for(const Domain& domain, const StableLaw& law, double touch_eps = 1e-3);
};

enum class ExitKind { Jump, DriftCross, Censored };

const char* to_string(ExitKind kind);

struct ExitRecord {
    double tau = 0.0;  ///< exit time, or the horizon when censored
    Point x_exit;      ///< position at the end of the exit step
    Point x_pre;       ///< position before the exit step
    ExitKind exit_kind = ExitKind::Censored;
    bool touched_boundary = false;  ///< |signed_distance(x_exit)| <= touch_eps
    double exit_jump = 0.0;         ///< |jump part| of the exit step
    std::uint64_t steps = 0;
};

/// One path's contribution to u(t,x) = E[phi(X_t) 1{tau>t}] + E[int_0^{t^tau} f(t-s,X_s) ds].
struct PathFunctionalSample {
    bool survived = false;
    double phi_term = 0.0;
    double running_term = 0.0;  ///< trapezoid rule on the path's own time grid

    double value() const noexcept { return phi_term + running_term; }
};

struct StepResult {
    Point next;
    Point drift_part;
    Point jump_part;
};

/// Euler step with an exact stable increment: x' = x + b(x) dt + dZ(dt).
/// With `suppress_jumps` the noise is switched off (deterministic flow).
StepResult step(std::span<const double> x, double dt, const Drift& drift, const StableLaw& law,
                RngStream& stream, bool suppress_jumps = false);

/// Optional per-step record of a path, dumped as CSV (t, x1..xd, dt, jump).
struct PathTrace {
    struct Row {
        double t;
        Point x;
        double dt;
        double jump;
    };
    std::vector<Row> rows;

    void write_csv(std::ostream& out) const;
};

/// Runs the path from x0 until it leaves D or reaches cfg.horizon.
ExitRecord simulate_until_exit(std::span<const double> x0, const Domain& domain, const Drift& drift,
                               const StableLaw& law, const PathConfig& cfg, RngStream& stream,
                               PathTrace* trace = nullptr);
ExitRecord simulate_until_exit(std::span<const double> x0, const ProblemSpec& problem,
                               const PathConfig& cfg, RngStream& stream, PathTrace* trace = nullptr);

/// One Feynman-Kac sample at time t.
PathFunctionalSample simulate_value(std::span<const double> x0, double t, const ProblemSpec& problem,
                                    const PathConfig& cfg, RngStream& stream);

/// Samples at several increasing times from a single path; the step grid is
/// forced through every requested time.
std::vector<PathFunctionalSample> simulate_values(std::span<const double> x0, std::span<const double> times,
                                                  const ProblemSpec& problem, const PathConfig& cfg,
                                                  RngStream& stream);

}  // namespace nld
