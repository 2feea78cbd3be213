#include "nld/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <set>
#include <sstream>

#include <json.hpp>

#include "nld/analytic.hpp"
#include "nld/csv.hpp"
#include "nld/estimators.hpp"
#include "nld/experiments.hpp"
#include "nld/fd_solver.hpp"
#include "nld/quadrature.hpp"
#include "nld/rng.hpp"

namespace nld {

namespace fs = std::filesystem;

bool AcceptanceReport::all_pass() const {
    return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.pass; });
}

std::vector<std::string> compare_directories(const std::string& a, const std::string& b) {
    auto listing = [](const fs::path& root) {
        std::set<std::string> files;
        if (fs::exists(root))
            for (const auto& e : fs::recursive_directory_iterator(root))
                if (e.is_regular_file()) files.insert(fs::relative(e.path(), root).generic_string());
        return files;
    };
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const auto fa = listing(a);
    const auto fb = listing(b);
    std::set<std::string> all = fa;
    all.insert(fb.begin(), fb.end());
    std::vector<std::string> diff;
    for (const std::string& f : all)
        if (!fa.count(f) || !fb.count(f) || slurp(fs::path(a) / f) != slurp(fs::path(b) / f)) diff.push_back(f);
    return diff;
}

namespace {

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ProblemSpec unit_interval(double alpha, const std::string& drift, DataFunction phi = DataFunction::zero(),
                          DataFunction f = DataFunction::zero()) {
    return ProblemSpec{Domain(Interval{0.0, 1.0}), Drift::preset(drift), StableLaw(alpha, 1), std::move(phi),
                       std::move(f)};
}

ProblemSpec example13() { return unit_interval(0.5, "example13", DataFunction::sin_affine(3.0, kPi / 2)); }

class Suite {
public:
    explicit Suite(const AcceptanceOptions& o) : opts_(o), dir_(o.out_dir) {}

    std::uint64_t paths(std::uint64_t n) const {
        return std::max<std::uint64_t>(1000, static_cast<std::uint64_t>(std::llround(n * opts_.path_scale)));
    }
    RunOptions run(std::uint64_t tag) const { return RunOptions{mix_seed(opts_.seed, tag), opts_.threads, 0}; }
    std::string file(const std::string& name) const { return (dir_ / name).string(); }

    void c01(CriterionResult& r) {
        QuadratureConfig qc;
        qc.abs_tol = 1e-6;
        const double band = 10 * qc.abs_tol;
        CsvWriter csv(file("c01_es34.csv"), {"alpha", "theta", "distance", "value", "err_bound"});
        r.pass = true;
        for (double alpha : {0.5, 1.0, 1.5}) {
            for (int q : {1, 2, 3}) {
                const double theta = q * alpha / 4;
                const auto v = frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, theta}, KernelSpec::constant(),
                                                      alpha, 1.0, qc);
                csv.row({fmt17(alpha), fmt17(theta), "1", fmt17(v.value), fmt17(v.err_bound)});
                const bool ok = q == 1 ? v.value < -band : q == 2 ? std::abs(v.value) <= band : v.value > band;
                r.pass = r.pass && ok;
                r.detail += "a=" + num(alpha) + " th=" + num(theta) + ": " + num(v.value) + (ok ? "" : " FAIL") + "; ";
            }
        }
    }

    void c02(CriterionResult& r) {
        ProblemSpec p{Domain(Interval{-1.0, 1.0}), Drift::zero(1), StableLaw(1.0, 1)};
        PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
        cfg.dt_base = 1e-3;
        const double x0[] = {0.0};
        const ExitMoments m = estimate_exit_moments(x0, p, cfg, paths(100000), 1, run(2));
        const double oracle = getoor_mean_exit_time(1, 1.0, 1.0, 0.0);
        const double est = m.orders[0].mean, se = m.orders[0].std_error;
        const double half = 0.05 + 3 * se;
        r.pass = std::abs(est - oracle) <= half;
        r.detail = "E0 tau = " + num(est) + " +- " + num(se) + ", oracle " + num(oracle) + ", band +-" + num(half) +
                   ", censored " + num(m.censored_fraction);
        CsvWriter csv(file("c02_getoor.csv"), {"x", "order", "mean", "stderr", "censored_frac", "oracle"});
        csv.row({"0", "1", fmt17(est), fmt17(se), fmt17(m.censored_fraction), fmt17(oracle)});
    }

    void c03(CriterionResult& r) {
        const ProblemSpec p = unit_interval(0.5, "constant-one");
        const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
        const std::vector<double> xs{1e-3, 1e-2, 0.05, 0.1, 0.2};
        CsvWriter csv(file("c03_positivity.csv"), {"x", "order", "mean", "stderr", "censored_frac"});
        std::vector<double> means;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double x0[] = {xs[j]};
            const ExitMoments m = estimate_exit_moments(x0, p, cfg, paths(100000), 1, run(mix_seed(3, j)));
            csv.row({fmt17(xs[j]), "1", fmt17(m.orders[0].mean), fmt17(m.orders[0].std_error),
                     fmt17(m.censored_fraction)});
            means.push_back(m.orders[0].mean);
        }
        const double lo = *std::min_element(means.begin(), means.end());
        r.pass = lo >= 0.25 * means.back();
        r.detail = "min E tau = " + num(lo) + " at x=" +
                   num(xs[std::min_element(means.begin(), means.end()) - means.begin()]) + ", 0.25 E_0.2 tau = " +
                   num(0.25 * means.back());
    }

    void c04(CriterionResult& r) {
        const ProblemSpec p = unit_interval(0.5, "constant-one");
        const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law, 1e-4);
        const std::vector<double> eps{1e-2, 1e-3, 1e-4};
        const double x0[] = {0.5};
        const ExitPositionTable t = estimate_exit_position(x0, p, cfg, paths(100000), eps, run(4));
        const std::size_t left = t.component_index("left"), right = t.component_index("right");
        CsvWriter csv(file("c04_touching.csv"), {"x", "eps", "component", "fraction"});
        for (std::size_t e = 0; e < eps.size(); ++e)
            for (std::size_t c = 0; c < t.components.size(); ++c)
                csv.row({"0.5", fmt17(eps[e]), t.components[c], fmt17(t.fraction(e, c))});
        const double l0 = t.fraction(0, left), l1 = t.fraction(1, left), l2 = t.fraction(2, left);
        const double rt = t.fraction(2, right);
        const bool monotone = l1 <= l0 && l2 <= l1;
        r.pass = l2 < 0.01 && rt > 0.01 && monotone;
        r.detail = "left " + num(l0) + " / " + num(l1) + " / " + num(l2) + " (eps 1e-2/1e-3/1e-4), right at 1e-4 " +
                   num(rt) + ", non-increasing " + (monotone ? "yes" : "no");
    }

    void c05(CriterionResult& r) {
        std::vector<double> xs;
        for (int k = 1; k <= 19; ++k) xs.push_back(0.05 * k);
        CsvWriter csv(file("c05_ratio.csv"), {"alpha", "x", "e_tau", "denominator", "ratio", "stderr"});
        r.pass = true;
        for (double alpha : {1.5, 0.5}) {
            const ProblemSpec p = unit_interval(alpha, "constant-one");
            const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
            const auto rows = ratio_profile(xs, p, cfg, paths(100000), run(alpha > 1 ? 51 : 52));
            std::vector<double> ratios;
            for (const RatioRow& row : rows) {
                csv.row({fmt17(alpha), fmt17(row.x), fmt17(row.e_tau), fmt17(row.denominator), fmt17(row.ratio),
                         fmt17(row.std_error)});
                ratios.push_back(row.ratio);
            }
            std::vector<double> sorted = ratios;
            std::sort(sorted.begin(), sorted.end());
            const double med = sorted[sorted.size() / 2];
            const bool ok = sorted.front() >= med / 3 && sorted.back() <= 3 * med;
            r.pass = r.pass && ok;
            r.detail += "a=" + num(alpha) + ": median " + num(med) + ", range [" + num(sorted.front()) + ", " +
                        num(sorted.back()) + "]; ";
        }
    }

    void c06(CriterionResult& r) {
        CsvWriter csv(file("c06_jump_exit.csv"), {"alpha", "drift", "x", "eps", "component", "fraction"});
        r.pass = true;
        const std::vector<double> eps{1e-3};
        for (auto [alpha, drift] : {std::pair{1.5, "constant-one"}, std::pair{0.5, "zero"}}) {
            const ProblemSpec p = unit_interval(alpha, drift);
            const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law, 1e-3);
            const double x0[] = {0.5};
            const ExitPositionTable t = estimate_exit_position(x0, p, cfg, paths(100000), eps, run(alpha > 1 ? 61 : 62));
            double total = 0;
            for (std::size_t c = 0; c < t.components.size(); ++c) {
                csv.row({fmt17(alpha), drift, "0.5", "0.001", t.components[c], fmt17(t.fraction(0, c))});
                total += t.fraction(0, c);
            }
            r.pass = r.pass && total < 0.01;
            r.detail += "a=" + num(alpha) + " b=" + drift + ": touch " + num(total) + "; ";
        }
    }

    /// Also records the maximum-principle data used by criterion 10.
    void c07(CriterionResult& r) {
        const ProblemSpec p = example13();
        const Grid1D grid = Grid1D::make(0.0, 1.0, 2000);
        const double dt = std::min(1e-3, 0.9 * grid.h() / (p.drift.sup_norm(p.domain) + kCflGuard));
        const GridSolution fd = solve(p, grid, dt, 0.5, {0.5});
        record_fd_range(fd);
        const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
        CsvWriter csv(file("c07_crossval.csv"), {"t", "x", "mc", "stderr", "fd", "band"});
        r.pass = true;
        const std::vector<double> xs{0.25, 0.5, 0.75};
        for (std::size_t j = 0; j < xs.size(); ++j) {
            const double x0[] = {xs[j]};
            const EstimatorResult mc = estimate_u(0.5, x0, p, cfg, paths(100000), run(mix_seed(7, j)));
            record_mc(mc);
            const double u = fd.value_at(fd.times.size() - 1, xs[j]);
            const double band = 3 * mc.std_error + 0.05;
            r.pass = r.pass && std::abs(mc.mean - u) <= band;
            csv.row({"0.5", fmt17(xs[j]), fmt17(mc.mean), fmt17(mc.std_error), fmt17(u), fmt17(band)});
            r.detail += "x=" + num(xs[j]) + ": mc " + num(mc.mean) + " fd " + num(u) + "; ";
        }
    }

    void c08(CriterionResult& r) {
        CsvWriter csv(file("c08_dyda.csv"), {"alpha", "x", "fd", "exact"});
        r.pass = true;
        for (double alpha : {0.5, 1.5}) {
            const ProblemSpec p{Domain(Interval{-1.0, 1.0}), Drift::zero(1), StableLaw(alpha, 1), DataFunction::zero(),
                                DataFunction::constant(dyda_constant(1, alpha))};
            const Grid1D grid = Grid1D::make(-1.0, 1.0, 2000);
            const std::vector<double> u = solve_steady(p, grid);
            double err = 0, peak = 0;
            for (int i = 0; i < grid.N; ++i) {
                const double x = grid.node(i);
                const double exact = std::pow(1 - x * x, alpha / 2);
                err = std::max(err, std::abs(u[i] - exact));
                peak = std::max(peak, exact);
                if (i % 20 == 0 || i == grid.N - 1) csv.row({fmt17(alpha), fmt17(x), fmt17(u[i]), fmt17(exact)});
            }
            const double rel = err / peak;
            r.pass = r.pass && rel <= 0.02;
            r.detail += "a=" + num(alpha) + ": max error / max u = " + num(rel) + "; ";
        }
    }

    void c09(CriterionResult& r) {
        CsvWriter csv(file("c09_regimes.csv"), {"part", "x", "method", "value", "stderr", "statistic"});
        std::string detail;

        const ProblemSpec pa = example13();
        const Grid1D grid = Grid1D::make(0.0, 1.0, 2000);
        const double dt = std::min(1e-3, 0.9 * grid.h() / (pa.drift.sup_norm(pa.domain) + kCflGuard));
        const GridSolution fd = solve(pa, grid, dt, 1.0, {1.0});
        record_fd_range(fd);
        const PathConfig cfg_a = PathConfig::defaults_for(pa.domain, pa.law);
        double ratio[2];
        const double xa[] = {0.99, 0.999};
        for (int j = 0; j < 2; ++j) {
            const double u = fd.value_at(fd.times.size() - 1, xa[j]);
            ratio[j] = std::abs(u) / (1 - xa[j]);
            csv.row({"a", fmt17(xa[j]), "fd", fmt17(u), "0", fmt17(ratio[j])});
            const double x0[] = {xa[j]};
            const EstimatorResult mc = estimate_u(1.0, x0, pa, cfg_a, paths(100000), run(mix_seed(91, j)));
            record_mc(mc);
            csv.row({"a", fmt17(xa[j]), "mc", fmt17(mc.mean), fmt17(mc.std_error),
                     fmt17(std::abs(mc.mean) / (1 - xa[j]))});
        }
        const bool pass_a = ratio[1] <= 3 * ratio[0];
        detail += "(a) |u|/d ratio " + num(ratio[1] / ratio[0]) + (pass_a ? " ok" : " FAIL") + "; ";

        const ProblemSpec pb = unit_interval(0.5, "mirror13", DataFunction::zero(), DataFunction::constant(1.0));
        const PathConfig cfg_b = PathConfig::defaults_for(pb.domain, pb.law);
        double etau[2];
        const double xb[] = {1e-3, 0.1};
        for (int j = 0; j < 2; ++j) {
            const double x0[] = {xb[j]};
            const ExitMoments m = estimate_exit_moments(x0, pb, cfg_b, paths(100000), 1, run(mix_seed(92, j)));
            etau[j] = m.orders[0].mean;
            csv.row({"b", fmt17(xb[j]), "mc", fmt17(etau[j]), fmt17(m.orders[0].std_error),
                     fmt17(m.censored_fraction)});
        }
        const bool pass_b = etau[0] >= 0.5 * etau[1];
        detail += "(b) E tau " + num(etau[0]) + " vs " + num(etau[1]) + (pass_b ? " ok" : " FAIL") + "; ";

        const ProblemSpec pc = unit_interval(0.5, "minusx", DataFunction::sin_affine(2.5, 2.5 * kPi));
        const PathConfig cfg_c = PathConfig::defaults_for(pc.domain, pc.law);
        const std::vector<double> xc{0.05, 0.02, 0.01, 0.005};
        std::vector<EstimatorResult> uc;
        for (std::size_t j = 0; j < xc.size(); ++j) {
            const double x0[] = {xc[j]};
            uc.push_back(estimate_u(1.0, x0, pc, cfg_c, paths(100000), run(mix_seed(93, j))));
            record_mc(uc.back());
            csv.row({"c", fmt17(xc[j]), "mc", fmt17(uc.back().mean), fmt17(uc.back().std_error),
                     fmt17(std::abs(uc.back().mean))});
        }
        bool pass_c = true;
        for (std::size_t j = 1; j < uc.size(); ++j) {
            const double slack = 2 * std::hypot(uc[j].std_error, uc[j - 1].std_error);
            if (!(std::abs(uc[j].mean) < std::abs(uc[j - 1].mean) + slack)) pass_c = false;
        }
        detail += "(c) |u| " + num(std::abs(uc[0].mean)) + " > " + num(std::abs(uc[1].mean)) + " > " +
                  num(std::abs(uc[2].mean)) + " > " + num(std::abs(uc[3].mean)) + (pass_c ? " ok" : " FAIL");
        r.pass = pass_a && pass_b && pass_c;
        r.detail = detail;
    }

    void c10(CriterionResult& r) {
        if (!have_fd_ && mc_count_ == 0) {
            r.pass = false;
            r.detail = "needs criterion 7 or 9 in the same run";
            return;
        }
        r.pass = fd_min_ >= -1.0 && fd_max_ <= 1.0 && mc_worst_ <= 0.0;
        r.detail = "FD nodes in [" + num(fd_min_) + ", " + num(fd_max_) + "], " + std::to_string(mc_count_) +
                   " MC estimates, worst excess over 1 + 3 stderr " + num(mc_worst_);
        CsvWriter csv(file("c10_max_principle.csv"), {"fd_min", "fd_max", "mc_count", "mc_worst_excess"});
        csv.row({fmt17(fd_min_), fmt17(fd_max_), std::to_string(mc_count_), fmt17(mc_worst_)});
    }

    void c11(CriterionResult& r) {
        const fs::path base = dir_ / "repro";
        std::vector<int> mc{2, 3, 4, 5, 6, 7, 9, 10};
        auto rerun = [&](unsigned threads, const std::string& sub) {
            AcceptanceOptions o = opts_;
            o.threads = threads;
            o.path_scale = opts_.repro_scale;
            o.only = mc;
            o.out_dir = (base / sub).string();
            o.log = nullptr;
            fs::remove_all(o.out_dir);
            return run_acceptance(o);
        };
        const auto a = rerun(1, "threads-1");
        const auto b = rerun(opts_.repro_threads, "threads-" + std::to_string(opts_.repro_threads));
        const auto diff = compare_directories((base / "threads-1").string(),
                                              (base / ("threads-" + std::to_string(opts_.repro_threads))).string());
        std::size_t files = 0;
        for (const auto& e : fs::recursive_directory_iterator(base / "threads-1"))
            if (e.is_regular_file()) ++files;
        r.pass = diff.empty() && files > 0;
        r.detail = std::to_string(files) + " files compared at path scale " + num(opts_.repro_scale) + ", 1 vs " +
                   std::to_string(opts_.repro_threads) + " threads, " + std::to_string(diff.size()) + " differ";
        for (const auto& d : diff) r.detail += " " + d;
        (void)a;
        (void)b;
    }

    const AcceptanceOptions& opts_;
    fs::path dir_;

private:
    void record_fd_range(const GridSolution& s) {
        for (const auto& row : s.values)
            for (double v : row) {
                fd_min_ = std::min(fd_min_, v);
                fd_max_ = std::max(fd_max_, v);
            }
        have_fd_ = true;
    }
    void record_mc(const EstimatorResult& e) {
        ++mc_count_;
        mc_worst_ = std::max(mc_worst_, std::abs(e.mean) - (1 + 3 * e.std_error));
    }

    bool have_fd_ = false;
    double fd_min_ = 0.0, fd_max_ = 0.0;
    std::size_t mc_count_ = 0;
    double mc_worst_ = -1.0;
};

}  // namespace

AcceptanceReport run_acceptance(const AcceptanceOptions& opts) {
    using Member = void (Suite::*)(CriterionResult&);
    struct Entry {
        int id;
        const char* title;
        Member run;
    };
    static const Entry entries[] = {
        {1, "barrier sign pattern", &Suite::c01},
        {2, "Getoor mean exit time", &Suite::c02},
        {3, "exit time positivity near the inaccessible endpoint", &Suite::c03},
        {4, "asymmetric boundary touching", &Suite::c04},
        {5, "exit time ratio flatness", &Suite::c05},
        {6, "jump exit without drift domination", &Suite::c06},
        {7, "Monte-Carlo versus finite differences", &Suite::c07},
        {8, "Dyda steady state", &Suite::c08},
        {9, "boundary regimes", &Suite::c09},
        {10, "maximum principle", &Suite::c10},
        {11, "bit reproducibility across thread counts", &Suite::c11},
    };
    fs::create_directories(opts.out_dir);
    Suite suite(opts);
    AcceptanceReport report;
    for (const Entry& e : entries) {
        if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), e.id) == opts.only.end()) continue;
        CriterionResult r;
        r.id = e.id;
        r.title = e.title;
        const auto start = std::chrono::steady_clock::now();
        try {
            (suite.*e.run)(r);
        } catch (const std::exception& ex) {
            r.pass = false;
            r.detail = std::string("error: ") + ex.what();
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (opts.log) {
            char head[16];
            std::snprintf(head, sizeof head, "%2d", r.id);
            *opts.log << (r.pass ? "[PASS] " : "[FAIL] ") << head << ' ' << r.title << " | " << r.detail << " ("
                      << num(r.seconds) << " s)" << std::endl;
        }
        report.results.push_back(std::move(r));
    }

    nlohmann::json manifest;
    manifest["version"] = kVersion;
    manifest["seed"] = opts.seed;
    manifest["path_scale"] = opts.path_scale;
    manifest["all_pass"] = report.all_pass();
    manifest["criteria"] = nlohmann::json::array();
    for (const auto& r : report.results)
        manifest["criteria"].push_back({{"id", r.id}, {"title", r.title}, {"pass", r.pass}, {"detail", r.detail}});
    std::ofstream(fs::path(opts.out_dir) / "acceptance.manifest.json") << manifest.dump(2) << '\n';
    return report;
}

}  // namespace nld
