#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nld/exact_sum.hpp"
#include "nld/paths.hpp"
#include "nld/problem.hpp"

namespace nld {

/// Running count, sum and sum of squares, all exact.
class MomentAccumulator {
public:
    void add(double x);
    void merge(const MomentAccumulator& other);

    std::uint64_t count() const noexcept { return n_; }
    double mean() const;
    /// Unbiased sample variance (0 for fewer than two samples).
    double variance() const;

private:
    std::uint64_t n_ = 0;
    ExactSum sum_;
    ExactSum sum_sq_;
};

struct EstimatorResult {
    std::uint64_t n = 0;
    double mean = 0.0;
    double variance = 0.0;
    double std_error = 0.0;  ///< sqrt(variance / n)
    double ci95_lo = 0.0;
    double ci95_hi = 0.0;
    MomentAccumulator accumulator;

    static EstimatorResult from(const MomentAccumulator& acc);
};

/// Pooled-sample statistics; exact, so grouping and order never matter.
EstimatorResult merge(std::span<const EstimatorResult> results);

/// Seed and thread count. Path i always uses stream (seed, stream_offset + i),
/// so results do not depend on `threads`.
struct RunOptions {
    std::uint64_t seed = 42;
    unsigned threads = 1;
    std::uint64_t stream_offset = 0;
};

struct ExitMoments {
    std::vector<EstimatorResult> orders;  ///< orders[k-1] estimates E (tau ^ horizon)^k
    std::uint64_t censored = 0;
    double censored_fraction = 0.0;
    bool degenerate = false;  ///< every path censored
};

ExitMoments estimate_exit_moments(std::span<const double> x0, const ProblemSpec& problem, const PathConfig& cfg,
                                  std::uint64_t n_paths, int max_order, const RunOptions& opts = {});

struct ExitPositionTable {
    std::uint64_t n_paths = 0;
    std::vector<std::string> components;
    std::vector<double> eps_grid;
    /// touch_counts[e][c]: exits within eps_grid[e] of component c.
    std::vector<std::vector<std::uint64_t>> touch_counts;
    std::uint64_t censored = 0;
    std::uint64_t drift_cross = 0;
    /// Histogram of exit positions (d = 1) or overshoot distances (d > 1).
    double hist_lo = 0.0;
    double hist_hi = 0.0;
    std::vector<std::uint64_t> hist_counts;
    std::uint64_t hist_underflow = 0;
    std::uint64_t hist_overflow = 0;

    double fraction(std::size_t eps_index, std::size_t component) const {
        return static_cast<double>(touch_counts[eps_index][component]) / static_cast<double>(n_paths);
    }
    double censored_fraction() const { return static_cast<double>(censored) / static_cast<double>(n_paths); }
    std::size_t component_index(const std::string& name) const;
};

ExitPositionTable estimate_exit_position(std::span<const double> x0, const ProblemSpec& problem,
                                         const PathConfig& cfg, std::uint64_t n_paths,
                                         std::span<const double> eps_grid, const RunOptions& opts = {},
                                         std::size_t hist_bins = 60);

/// Monte-Carlo Feynman-Kac estimate of u(t, x0).
EstimatorResult estimate_u(double t, std::span<const double> x0, const ProblemSpec& problem, const PathConfig& cfg,
                           std::uint64_t n_paths, const RunOptions& opts = {});

/// u(t_k, x0) for increasing times, one path per sample serving every t_k.
std::vector<EstimatorResult> estimate_u_times(std::span<const double> times, std::span<const double> x0,
                                              const ProblemSpec& problem, const PathConfig& cfg,
                                              std::uint64_t n_paths, const RunOptions& opts = {});

/// 1_{alpha in [1,2)} d_x^{alpha/2} + 1_{alpha in (0,1)} min(1/2, (1-x)_+) on D = (0,1).
double exit_time_profile_denominator(double alpha, double x);

struct RatioRow {
    double x;
    double e_tau;
    double denominator;
    double ratio;
    double std_error;  ///< of the ratio
    double censored_fraction;
};

/// E_x tau / denominator along x_grid for b = 1 on (0,1). Grid point j uses
/// seed mix_seed(opts.seed, j).
std::vector<RatioRow> ratio_profile(std::span<const double> x_grid, const ProblemSpec& problem, const PathConfig& cfg,
                                    std::uint64_t n_paths_per_point, const RunOptions& opts = {});

struct DecayRow {
    double x;
    double d_x;
    double u;
    double u_abs;
    double std_error;
    double ratio_linear;  ///< |u| / d_x
    double ratio_theta;   ///< |u| / d_x^theta
};

struct DecayProfile {
    std::vector<DecayRow> rows;
    /// Least-squares slope of log|u| against log d_x; descriptive only.
    double loglog_slope = 0.0;
};

/// |u(t,x)| near the boundary. Points must be inside D and monotone in d_x.
DecayProfile boundary_decay_profile(double t, const ProblemSpec& problem, const PathConfig& cfg,
                                    std::uint64_t n_paths, std::span<const double> x_grid, double theta,
                                    const RunOptions& opts = {});

}  // namespace nld
