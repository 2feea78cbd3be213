#include "nld/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "nld/error.hpp"

namespace nld {

// ---------------------------------------------------------------------------
// Moments

void MomentAccumulator::add(double x) {
    ++n_;
    sum_.add(x);
    sum_sq_.add_product(x, x);
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
    n_ += other.n_;
    sum_.add(other.sum_);
    sum_sq_.add(other.sum_sq_);
}

double MomentAccumulator::mean() const {
    return n_ == 0 ? 0.0 : sum_.value() / static_cast<double>(n_);
}

double MomentAccumulator::variance() const {
    if (n_ < 2) return 0.0;
    // sum (x - m)^2 = Q - 2 m S + n m^2, evaluated exactly for the rounded mean m.
    const double m = mean();
    const double n = static_cast<double>(n_);
    ExactSum centred = sum_sq_;
    for (double s : sum_.partials()) centred.add_product(-2.0 * m, s);
    const double m2 = m * m;
    const double m2_err = std::fma(m, m, -m2);
    centred.add_product(n, m2);
    centred.add_product(n, m2_err);
    return std::max(0.0, centred.value()) / (n - 1.0);
}

EstimatorResult EstimatorResult::from(const MomentAccumulator& acc) {
    EstimatorResult r;
    r.n = acc.count();
    r.mean = acc.mean();
    r.variance = acc.variance();
    r.std_error = r.n == 0 ? 0.0 : std::sqrt(r.variance / static_cast<double>(r.n));
    r.ci95_lo = r.mean - 1.96 * r.std_error;
    r.ci95_hi = r.mean + 1.96 * r.std_error;
    r.accumulator = acc;
    return r;
}

EstimatorResult merge(std::span<const EstimatorResult> results) {
    if (results.empty()) throw ParameterError("merge needs at least one result");
    MomentAccumulator acc;
    for (const auto& r : results) acc.merge(r.accumulator);
    return EstimatorResult::from(acc);
}

// ---------------------------------------------------------------------------
// Parallel fan-out

namespace {

constexpr std::uint64_t kBlockSize = 256;

/// Splits [0, n) into fixed blocks independent of the thread count and runs
/// fn(begin, end) for each; results are returned in block order.
template <class Result, class Fn>
std::vector<Result> run_blocks(std::uint64_t n, unsigned threads, Fn fn) {
    const std::uint64_t n_blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<Result> results(n_blocks);
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            try {
                results[b] = fn(b * kBlockSize, std::min(n, (b + 1) * kBlockSize));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_blocks);
                return;
            }
        }
    };
    const unsigned n_threads =
        static_cast<unsigned>(std::clamp<std::uint64_t>(threads == 0 ? 1 : threads, 1, std::max<std::uint64_t>(1, n_blocks)));
    std::vector<std::thread> pool;
    pool.reserve(n_threads - 1);
    for (unsigned i = 1; i < n_threads; ++i) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

void require_start(std::span<const double> x0, const ProblemSpec& problem) {
    problem.validate();
    if (static_cast<int>(x0.size()) != problem.domain.dim()) throw ParameterError("start point dimension mismatch");
    if (!problem.domain.contains(x0)) throw ParameterError("start point must lie in D");
}

}  // namespace

// ---------------------------------------------------------------------------
// Exit times and positions

ExitMoments estimate_exit_moments(std::span<const double> x0, const ProblemSpec& problem, const PathConfig& cfg,
                                  std::uint64_t n_paths, int max_order, const RunOptions& opts) {
    require_start(x0, problem);
    if (n_paths < 100) throw ParameterError("exit-moment estimation needs at least 100 paths");
    if (max_order < 1) throw ParameterError("max_order must be >= 1");

    struct Block {
        std::vector<MomentAccumulator> orders;
        std::uint64_t censored = 0;
    };
    auto blocks = run_blocks<Block>(n_paths, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
        Block blk;
        blk.orders.resize(static_cast<std::size_t>(max_order));
        for (std::uint64_t i = begin; i < end; ++i) {
            RngStream stream(opts.seed, opts.stream_offset + i);
            const ExitRecord rec = simulate_until_exit(x0, problem, cfg, stream);
            if (rec.exit_kind == ExitKind::Censored) ++blk.censored;
            double power = 1.0;
            for (int k = 0; k < max_order; ++k) {
                power *= rec.tau;
                blk.orders[static_cast<std::size_t>(k)].add(power);
            }
        }
        return blk;
    });

    std::vector<MomentAccumulator> total(static_cast<std::size_t>(max_order));
    ExitMoments out;
    for (const auto& blk : blocks) {
        for (std::size_t k = 0; k < total.size(); ++k) total[k].merge(blk.orders[k]);
        out.censored += blk.censored;
    }
    for (const auto& acc : total) out.orders.push_back(EstimatorResult::from(acc));
    out.censored_fraction = static_cast<double>(out.censored) / static_cast<double>(n_paths);
    out.degenerate = out.censored == n_paths;
    return out;
}

std::size_t ExitPositionTable::component_index(const std::string& name) const {
    const auto it = std::find(components.begin(), components.end(), name);
    if (it == components.end()) throw ParameterError("unknown boundary component '" + name + "'");
    return static_cast<std::size_t>(it - components.begin());
}

ExitPositionTable estimate_exit_position(std::span<const double> x0, const ProblemSpec& problem,
                                         const PathConfig& cfg, std::uint64_t n_paths,
                                         std::span<const double> eps_grid, const RunOptions& opts,
                                         std::size_t hist_bins) {
    require_start(x0, problem);
    if (n_paths < 100) throw ParameterError("exit-position estimation needs at least 100 paths");
    for (double e : eps_grid) {
        if (!(e > 0.0)) throw ParameterError("eps_grid entries must be positive");
    }
    const Domain& domain = problem.domain;
    ExitPositionTable table;
    table.n_paths = n_paths;
    table.components = domain.boundary_components();
    table.eps_grid.assign(eps_grid.begin(), eps_grid.end());
    const std::size_t n_comp = table.components.size();
    const bool one_d = domain.dim() == 1;
    const double span = domain.bounded() ? domain.diameter() : 1.0;
    if (one_d) {
        const auto& iv = std::get<Interval>(domain.shape());
        table.hist_lo = iv.a - span;
        table.hist_hi = iv.b + span;
    } else {
        table.hist_lo = 0.0;
        table.hist_hi = span;
    }
    const double bin_width = (table.hist_hi - table.hist_lo) / static_cast<double>(hist_bins);

    struct Block {
        std::vector<std::uint64_t> touch;  // eps-major
        std::vector<std::uint64_t> hist;
        std::uint64_t censored = 0, drift_cross = 0, under = 0, over = 0;
    };
    auto blocks = run_blocks<Block>(n_paths, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
        Block blk;
        blk.touch.assign(eps_grid.size() * n_comp, 0);
        blk.hist.assign(hist_bins, 0);
        for (std::uint64_t i = begin; i < end; ++i) {
            RngStream stream(opts.seed, opts.stream_offset + i);
            const ExitRecord rec = simulate_until_exit(x0, problem, cfg, stream);
            if (rec.exit_kind == ExitKind::Censored) {
                ++blk.censored;
                continue;
            }
            if (rec.exit_kind == ExitKind::DriftCross) ++blk.drift_cross;
            for (std::size_t c = 0; c < n_comp; ++c) {
                const double dist = domain.distance_to_component(rec.x_exit, c);
                for (std::size_t e = 0; e < eps_grid.size(); ++e) {
                    if (dist <= eps_grid[e]) ++blk.touch[e * n_comp + c];
                }
            }
            const double v = one_d ? rec.x_exit[0] : -domain.signed_distance(rec.x_exit);
            if (v < table.hist_lo) {
                ++blk.under;
            } else if (v >= table.hist_hi) {
                ++blk.over;
            } else {
                const auto bin = std::min(hist_bins - 1, static_cast<std::size_t>((v - table.hist_lo) / bin_width));
                ++blk.hist[bin];
            }
        }
        return blk;
    });

    table.touch_counts.assign(eps_grid.size(), std::vector<std::uint64_t>(n_comp, 0));
    table.hist_counts.assign(hist_bins, 0);
    for (const auto& blk : blocks) {
        for (std::size_t e = 0; e < eps_grid.size(); ++e) {
            for (std::size_t c = 0; c < n_comp; ++c) table.touch_counts[e][c] += blk.touch[e * n_comp + c];
        }
        for (std::size_t b = 0; b < hist_bins; ++b) table.hist_counts[b] += blk.hist[b];
        table.censored += blk.censored;
        table.drift_cross += blk.drift_cross;
        table.hist_underflow += blk.under;
        table.hist_overflow += blk.over;
    }
    return table;
}

// ---------------------------------------------------------------------------
// Feynman-Kac solution

std::vector<EstimatorResult> estimate_u_times(std::span<const double> times, std::span<const double> x0,
                                              const ProblemSpec& problem, const PathConfig& cfg,
                                              std::uint64_t n_paths, const RunOptions& opts) {
    require_start(x0, problem);
    if (n_paths == 0) throw ParameterError("n_paths must be positive");
    using Block = std::vector<MomentAccumulator>;
    auto blocks = run_blocks<Block>(n_paths, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
        Block blk(times.size());
        for (std::uint64_t i = begin; i < end; ++i) {
            RngStream stream(opts.seed, opts.stream_offset + i);
            const auto samples = simulate_values(x0, times, problem, cfg, stream);
            for (std::size_t k = 0; k < samples.size(); ++k) blk[k].add(samples[k].value());
        }
        return blk;
    });
    std::vector<MomentAccumulator> total(times.size());
    for (const auto& blk : blocks) {
        for (std::size_t k = 0; k < total.size(); ++k) total[k].merge(blk[k]);
    }
    std::vector<EstimatorResult> out;
    out.reserve(total.size());
    for (const auto& acc : total) out.push_back(EstimatorResult::from(acc));
    return out;
}

EstimatorResult estimate_u(double t, std::span<const double> x0, const ProblemSpec& problem, const PathConfig& cfg,
                           std::uint64_t n_paths, const RunOptions& opts) {
    const double times[1] = {t};
    return estimate_u_times(times, x0, problem, cfg, n_paths, opts).front();
}

// ---------------------------------------------------------------------------
// Profiles

double exit_time_profile_denominator(double alpha, double x) {
    if (alpha >= 1.0) {
        const double d = std::max(0.0, std::min(x, 1.0 - x));
        return std::pow(d, 0.5 * alpha);
    }
    return std::min(0.5, std::max(0.0, 1.0 - x));
}

std::vector<RatioRow> ratio_profile(std::span<const double> x_grid, const ProblemSpec& problem, const PathConfig& cfg,
                                    std::uint64_t n_paths_per_point, const RunOptions& opts) {
    const auto* iv = std::get_if<Interval>(&problem.domain.shape());
    if (!iv || iv->a != 0.0 || iv->b != 1.0) throw ParameterError("ratio profile is defined on D = (0,1)");
    if (problem.drift.matrix()[0] != 0.0 || problem.drift.offset()[0] != 1.0) {
        throw ParameterError("ratio profile uses the constant drift b = 1");
    }
    std::vector<RatioRow> rows;
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        const double x = x_grid[j];
        if (!(x > 0.0 && x < 1.0)) throw ParameterError("ratio grid points must lie in (0,1)");
        RunOptions point_opts = opts;
        point_opts.seed = mix_seed(opts.seed, j);
        const double x0[1] = {x};
        const ExitMoments m = estimate_exit_moments(x0, problem, cfg, n_paths_per_point, 1, point_opts);
        const double denom = exit_time_profile_denominator(problem.law.alpha(), x);
        rows.push_back({x, m.orders[0].mean, denom, m.orders[0].mean / denom, m.orders[0].std_error / denom,
                        m.censored_fraction});
    }
    return rows;
}

DecayProfile boundary_decay_profile(double t, const ProblemSpec& problem, const PathConfig& cfg,
                                    std::uint64_t n_paths, std::span<const double> x_grid, double theta,
                                    const RunOptions& opts) {
    if (problem.domain.dim() != 1) throw ParameterError("decay profile is one-dimensional");
    DecayProfile profile;
    int direction = 0;
    double prev_d = 0.0;
    for (std::size_t j = 0; j < x_grid.size(); ++j) {
        const double x = x_grid[j];
        const double d = problem.domain.signed_distance(x);
        if (!(d > 0.0)) throw ParameterError("decay grid points must lie inside D");
        if (j > 0) {
            const int dir = d > prev_d ? 1 : (d < prev_d ? -1 : 0);
            if (dir == 0 || (direction != 0 && dir != direction)) {
                throw ParameterError("decay grid must be strictly monotone in the distance to the boundary");
            }
            direction = dir;
        }
        prev_d = d;
        RunOptions point_opts = opts;
        point_opts.seed = mix_seed(opts.seed, j);
        const double x0[1] = {x};
        const EstimatorResult u = estimate_u(t, x0, problem, cfg, n_paths, point_opts);
        const double u_abs = std::abs(u.mean);
        profile.rows.push_back({x, d, u.mean, u_abs, u.std_error, u_abs / d, u_abs / std::pow(d, theta)});
    }
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t m = 0;
    for (const auto& r : profile.rows) {
        if (r.u_abs <= 0.0) continue;
        const double lx = std::log(r.d_x), ly = std::log(r.u_abs);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m >= 2) {
        const double denom = m * sxx - sx * sx;
        profile.loglog_slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    }
    return profile;
}

}  // namespace nld
