#include "nld/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "nld/csv.hpp"
#include "nld/error.hpp"
#include "nld/estimators.hpp"
#include "nld/rng.hpp"

namespace nld {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> x_header(int dim) {
    if (dim == 1) return {"x"};
    std::vector<std::string> h;
    for (int i = 1; i <= dim; ++i) h.push_back("x" + std::to_string(i));
    return h;
}

std::vector<std::string> x_cells(const Point& x) {
    std::vector<std::string> c;
    for (double v : x) c.push_back(fmt17(v));
    return c;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

RunOptions run_options(const ExperimentConfig& cfg, std::uint64_t point_index) {
    return RunOptions{mix_seed(cfg.seed, point_index), cfg.threads, 0};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

struct Context {
    const ExperimentConfig& cfg;
    fs::path dir;
    RunResult& result;
    json extra = json::object();

    std::string file(const std::string& suffix) {
        const std::string name = cfg.name + suffix;
        result.artifacts.push_back(name);
        return (dir / name).string();
    }
};

void run_exit_time(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const ProblemSpec& p = *cfg.problem;
    CsvWriter csv(ctx.file(".csv"), concat(x_header(p.domain.dim()), {"order", "mean", "stderr", "censored_frac"}));
    std::vector<double> first_order;
    for (std::size_t j = 0; j < cfg.x.size(); ++j) {
        const ExitMoments m = estimate_exit_moments(cfg.x[j], p, cfg.paths, cfg.n_paths, cfg.max_order, run_options(cfg, j));
        for (int k = 0; k < cfg.max_order; ++k)
            csv.row(concat(x_cells(cfg.x[j]), {std::to_string(k + 1), fmt17(m.orders[k].mean),
                                               fmt17(m.orders[k].std_error), fmt17(m.censored_fraction)}));
        first_order.push_back(m.orders[0].mean);
        if (m.degenerate) ctx.extra["warnings"].push_back("all paths censored at point " + std::to_string(j));
    }
    for (const CheckSpec& c : cfg.checks) {
        std::size_t ref = 0;
        while (std::abs(cfg.x[ref][0] - c.reference_x) > 1e-12) ++ref;
        const double lo = *std::min_element(first_order.begin(), first_order.end());
        const bool pass = lo >= c.factor * first_order[ref];
        ctx.result.checks.push_back({c.name, pass,
                                     "min E tau = " + fmt17(lo) + ", bound " + fmt17(c.factor * first_order[ref])});
    }
}

void run_exit_position(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const ProblemSpec& p = *cfg.problem;
    CsvWriter csv(ctx.file(".csv"), concat(x_header(p.domain.dim()), {"eps", "component", "fraction"}));
    CsvWriter hist(ctx.file("_hist.csv"), concat(x_header(p.domain.dim()), {"bin_lo", "bin_hi", "count"}));
    std::vector<ExitPositionTable> tables;
    for (std::size_t j = 0; j < cfg.x.size(); ++j) {
        ExitPositionTable t = estimate_exit_position(cfg.x[j], p, cfg.paths, cfg.n_paths, cfg.eps, run_options(cfg, j));
        for (std::size_t e = 0; e < t.eps_grid.size(); ++e)
            for (std::size_t c = 0; c < t.components.size(); ++c)
                csv.row(concat(x_cells(cfg.x[j]), {fmt17(t.eps_grid[e]), t.components[c], fmt17(t.fraction(e, c))}));
        const double w = (t.hist_hi - t.hist_lo) / static_cast<double>(t.hist_counts.size());
        for (std::size_t b = 0; b < t.hist_counts.size(); ++b)
            hist.row(concat(x_cells(cfg.x[j]), {fmt17(t.hist_lo + b * w), fmt17(t.hist_lo + (b + 1) * w),
                                                std::to_string(t.hist_counts[b])}));
        ctx.extra["censored_fraction"].push_back(t.censored_fraction());
        ctx.extra["drift_cross_fraction"].push_back(static_cast<double>(t.drift_cross) / t.n_paths);
        tables.push_back(std::move(t));
    }
    for (const CheckSpec& c : cfg.checks) {
        bool pass = true;
        std::string detail;
        for (std::size_t j = 0; j < tables.size(); ++j) {
            const ExitPositionTable& t = tables[j];
            std::size_t comp;
            try {
                comp = t.component_index(c.component);
            } catch (const ParameterError&) {
                pass = false;
                detail += "unknown component " + c.component + "; ";
                continue;
            }
            std::size_t e = 0;
            while (std::abs(t.eps_grid[e] - c.eps) > 1e-12 * c.eps) ++e;
            const double f = t.fraction(e, comp);
            detail += "x" + std::to_string(j) + ": fraction " + fmt17(f);
            if (c.below && !(f < *c.below)) pass = false;
            if (c.above && !(f > *c.above)) pass = false;
            if (c.monotone) {
                std::vector<std::size_t> order(t.eps_grid.size());
                for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
                std::sort(order.begin(), order.end(), [&](auto a, auto b) { return t.eps_grid[a] > t.eps_grid[b]; });
                for (std::size_t i = 1; i < order.size(); ++i)
                    if (t.fraction(order[i], comp) > t.fraction(order[i - 1], comp)) pass = false;
                detail += " (monotone check)";
            }
            detail += "; ";
        }
        ctx.result.checks.push_back({c.name, pass, detail});
    }
}

void run_solve_mc(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const ProblemSpec& p = *cfg.problem;
    std::vector<std::vector<EstimatorResult>> res;
    for (std::size_t j = 0; j < cfg.x.size(); ++j)
        res.push_back(estimate_u_times(cfg.times, cfg.x[j], p, cfg.paths, cfg.n_paths, run_options(cfg, j)));
    CsvWriter csv(ctx.file(".csv"), concat(concat({"t"}, x_header(p.domain.dim())), {"value", "stderr"}));
    for (std::size_t k = 0; k < cfg.times.size(); ++k)
        for (std::size_t j = 0; j < cfg.x.size(); ++j)
            csv.row(concat(concat({fmt17(cfg.times[k])}, x_cells(cfg.x[j])),
                           {fmt17(res[j][k].mean), fmt17(res[j][k].std_error)}));
}

void run_solve_fd(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const ProblemSpec& p = *cfg.problem;
    const auto& iv = std::get<Interval>(p.domain.shape());
    const Grid1D grid = Grid1D::make(iv.a, iv.b, cfg.grid.N, cfg.grid.exterior_pad);
    const double cfl = grid.h() / (p.drift.sup_norm(p.domain) + kCflGuard);
    const double dt = cfg.grid.dt ? *cfg.grid.dt : std::min(1e-3, 0.9 * cfl);
    const GridSolution sol = solve(p, grid, dt, cfg.times.back(), cfg.times);
    ctx.extra["dt"] = dt;
    ctx.extra["N"] = grid.N;
    std::vector<double> xs;
    if (cfg.x.empty())
        xs = grid.nodes();
    else
        for (const Point& x : cfg.x) xs.push_back(x[0]);
    CsvWriter csv(ctx.file(".csv"), {"t", "x", "value", "stderr"});
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
        const auto it = std::find(sol.times.begin(), sol.times.end(), cfg.times[k]);
        const std::size_t ti = static_cast<std::size_t>(it - sol.times.begin());
        for (double x : xs) csv.row({fmt17(cfg.times[k]), fmt17(x), fmt17(sol.value_at(ti, x)), "0"});
    }
    GridSolution recorded = sol;
    if (recorded.times.front() == 0.0 && cfg.times.front() != 0.0) {
        recorded.times.erase(recorded.times.begin());
        recorded.values.erase(recorded.values.begin());
    }
    recorded.write_csv(ctx.file("_grid.csv"));
}

void run_barrier(Context& ctx) {
    const auto& cfg = ctx.cfg;
    const BarrierSweep& s = cfg.barrier;
    CsvWriter csv(ctx.file(".csv"), {"alpha", "theta", "distance", "value", "err_bound"});
    for (double alpha : s.alphas) {
        std::vector<double> thetas = s.thetas;
        for (double f : s.theta_fractions) thetas.push_back(f * alpha);
        for (double theta : thetas) {
            BarrierSpec b{s.geometry, theta};
            for (double dist : s.distances) {
                Point x(s.dim, 0.0);
                std::visit(
                    [&](const auto& g) {
                        using G = std::decay_t<decltype(g)>;
                        if constexpr (std::is_same_v<G, BallExteriorBarrier>)
                            x[0] = g.radius + dist;
                        else if constexpr (std::is_same_v<G, IntervalBarrier>)
                            x[0] = g.a + dist;
                        else
                            x[0] = dist;
                    },
                    s.geometry);
                const QuadratureResult r = frac_laplacian_barrier(b, s.kernel, alpha, x, cfg.quadrature);
                csv.row({fmt17(alpha), fmt17(theta), fmt17(dist), fmt17(r.value), fmt17(r.err_bound)});
            }
        }
    }
}

void run_ratio(Context& ctx) {
    const auto& cfg = ctx.cfg;
    std::vector<double> xs;
    for (const Point& x : cfg.x) xs.push_back(x[0]);
    const std::vector<RatioRow> rows =
        ratio_profile(xs, *cfg.problem, cfg.paths, cfg.n_paths, RunOptions{cfg.seed, cfg.threads, 0});
    CsvWriter csv(ctx.file(".csv"), {"x", "e_tau", "denominator", "ratio", "stderr"});
    std::vector<double> ratios;
    for (const RatioRow& r : rows) {
        csv.row({fmt17(r.x), fmt17(r.e_tau), fmt17(r.denominator), fmt17(r.ratio), fmt17(r.std_error)});
        ratios.push_back(r.ratio);
    }
    for (const CheckSpec& c : cfg.checks) {
        const double med = median(ratios);
        const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
        const bool pass = *lo >= med / c.factor && *hi <= med * c.factor;
        ctx.result.checks.push_back({c.name, pass,
                                     "median " + fmt17(med) + ", range [" + fmt17(*lo) + ", " + fmt17(*hi) + "]"});
    }
}

void run_decay(Context& ctx) {
    const auto& cfg = ctx.cfg;
    std::vector<double> xs;
    for (const Point& x : cfg.x) xs.push_back(x[0]);
    const DecayProfile prof = boundary_decay_profile(cfg.t, *cfg.problem, cfg.paths, cfg.n_paths, xs, cfg.theta,
                                                     RunOptions{cfg.seed, cfg.threads, 0});
    CsvWriter csv(ctx.file(".csv"), {"x", "d_x", "u", "stderr", "ratio_linear", "ratio_theta"});
    for (const DecayRow& r : prof.rows)
        csv.row({fmt17(r.x), fmt17(r.d_x), fmt17(r.u), fmt17(r.std_error), fmt17(r.ratio_linear),
                 fmt17(r.ratio_theta)});
    ctx.extra["loglog_slope"] = prof.loglog_slope;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    RunResult result;
    const auto start = std::chrono::steady_clock::now();
    const fs::path dir(cfg.output_dir);
    Context ctx{cfg, dir, result};
    try {
        fs::create_directories(dir);
        switch (cfg.kind) {
            case ExperimentKind::ExitTime: run_exit_time(ctx); break;
            case ExperimentKind::ExitPosition: run_exit_position(ctx); break;
            case ExperimentKind::SolveMc: run_solve_mc(ctx); break;
            case ExperimentKind::SolveFd: run_solve_fd(ctx); break;
            case ExperimentKind::Barrier: run_barrier(ctx); break;
            case ExperimentKind::Ratio: run_ratio(ctx); break;
            case ExperimentKind::Decay: run_decay(ctx); break;
        }
        if (std::any_of(result.checks.begin(), result.checks.end(), [](const auto& c) { return !c.pass; }))
            result.exit_code = kExitAcceptance;
    } catch (const std::exception& e) {
        result.exit_code = kExitRuntime;
        result.error = e.what();
    }
    result.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json manifest;
    json config = cfg.canonical;
    config.erase("threads");
    config.erase("output_dir");
    manifest["name"] = cfg.name;
    manifest["kind"] = to_string(cfg.kind);
    manifest["version"] = kVersion;
    manifest["config_hash"] = config_hash(cfg);
    manifest["seed"] = cfg.seed;
    manifest["n_paths"] = cfg.n_paths;
    manifest["config"] = config;
    manifest["wall_time_s"] = result.wall_time_s;
    manifest["status"] = result.exit_code == kExitOk ? "ok" : result.exit_code == kExitRuntime ? "failed" : "checks-failed";
    if (!result.error.empty()) manifest["error"] = result.error;
    manifest["artifacts"] = result.artifacts;
    manifest["checks"] = json::array();
    for (const auto& c : result.checks) manifest["checks"].push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    if (!ctx.extra.empty()) manifest["diagnostics"] = ctx.extra;
    try {
        fs::create_directories(dir);
        std::ofstream out(dir / (cfg.name + ".manifest.json"));
        out << manifest.dump(2) << '\n';
        if (!out) throw std::runtime_error("cannot write manifest");
    } catch (const std::exception& e) {
        result.exit_code = kExitRuntime;
        if (result.error.empty()) result.error = e.what();
    }
    return result;
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{"figure1", "figure3", "figure4", "figure5", "prop81", "es34"};
    return names;
}

namespace {

json interval01() { return {{"type", "interval"}, {"a", 0.0}, {"b", 1.0}}; }

json sin_affine(double a, double b) { return {{"type", "sin_affine"}, {"a", a}, {"b", b}}; }

json surface(const std::string& name, const std::string& drift, const json& phi) {
    json times = json::array(), xs = json::array();
    for (int k = 1; k <= 50; ++k) times.push_back(k / 50.0);
    for (int j = 1; j <= 50; ++j) xs.push_back(j / 51.0);
    return {{"name", name},
            {"kind", "solve-mc"},
            {"problem", {{"domain", interval01()}, {"drift", drift}, {"alpha", 0.5}, {"phi", phi}}},
            {"times", times},
            {"x", xs},
            {"n_paths", 10000},
            {"output_dir", "out/" + name}};
}

}  // namespace

std::vector<json> preset_configs(const std::string& name) {
    constexpr double pi = std::numbers::pi;
    if (name == "figure1") {
        std::vector<json> out;
        for (double alpha : {1.5, 0.5}) {
            const std::string n = alpha > 1 ? "figure1-alpha1.5" : "figure1-alpha0.5";
            out.push_back({{"name", n},
                           {"kind", "ratio"},
                           {"problem", {{"domain", interval01()}, {"drift", "constant-one"}, {"alpha", alpha}}},
                           {"n_paths", 100000},
                           {"checks", {{{"name", "flatness-factor-3"}, {"rule", "flatness"}, {"factor", 3.0}}}},
                           {"output_dir", "out/figure1"}});
        }
        return out;
    }
    if (name == "figure3") return {surface("figure3", "mirror13", sin_affine(3.0, 0.0))};
    if (name == "figure4") return {surface("figure4", "example13", sin_affine(3.0, pi / 2))};
    if (name == "figure5") return {surface("figure5", "minusx", sin_affine(2.5, 2.5 * pi))};
    if (name == "prop81") {
        const json problem = {{"domain", interval01()}, {"drift", "constant-one"}, {"alpha", 0.5}};
        json pos = {{"name", "prop81-exit-position"},
                    {"kind", "exit-position"},
                    {"problem", problem},
                    {"x", {0.5}},
                    {"eps", {1e-2, 1e-3, 1e-4}},
                    {"n_paths", 100000},
                    {"checks",
                     {{{"name", "left-touch-vanishes"}, {"rule", "touch-fraction"}, {"component", "left"},
                       {"eps", 1e-4}, {"below", 0.01}, {"monotone", true}},
                      {{"name", "right-touch-positive"}, {"rule", "touch-fraction"}, {"component", "right"},
                       {"eps", 1e-4}, {"above", 0.01}}}},
                    {"output_dir", "out/prop81"}};
        json time = {{"name", "prop81-exit-time"},
                     {"kind", "exit-time"},
                     {"problem", problem},
                     {"x", {1e-3, 1e-2, 0.05, 0.1, 0.2}},
                     {"n_paths", 100000},
                     {"checks",
                      {{{"name", "exit-time-bounded-below"}, {"rule", "min-ratio"}, {"factor", 0.25},
                        {"reference_x", 0.2}}}},
                     {"output_dir", "out/prop81"}};
        return {pos, time};
    }
    if (name == "es34") {
        return {{{"name", "es34"},
                 {"kind", "barrier"},
                 {"barrier",
                  {{"geometry", "half-space"},
                   {"alphas", {0.5, 1.0, 1.5}},
                   {"theta_fractions", {0.25, 0.5, 0.75}},
                   {"distances", {1.0}}}},
                 {"quadrature", {{"abs_tol", 1e-6}}},
                 {"output_dir", "out/es34"}}};
    }
    throw ConfigError("", "unknown preset '" + name + "'");
}

}  // namespace nld
