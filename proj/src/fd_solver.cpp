#include "nld/fd_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "nld/analytic.hpp"
#include "nld/error.hpp"

namespace nld {

Grid1D Grid1D::make(double a, double b, int N, int exterior_pad) {
    Grid1D g{a, b, N, exterior_pad};
    g.validate();
    return g;
}

void Grid1D::validate() const {
    if (!(a < b) || !std::isfinite(a) || !std::isfinite(b)) throw ParameterError("grid needs finite a < b");
    if (N < 1) throw ParameterError("grid needs at least one interior node");
    if (exterior_pad < 0) throw ParameterError("exterior_pad must be non-negative");
}

std::vector<double> Grid1D::nodes() const {
    std::vector<double> x(N);
    for (int i = 0; i < N; ++i) x[i] = node(i);
    return x;
}

std::vector<double> Grid1D::padded_nodes() const {
    std::vector<double> x;
    x.reserve(N + 2 * exterior_pad);
    for (int k = exterior_pad; k >= 1; --k) x.push_back(a - (k - 1) * h());
    for (int i = 0; i < N; ++i) x.push_back(node(i));
    for (int k = 1; k <= exterior_pad; ++k) x.push_back(b + (k - 1) * h());
    return x;
}

namespace {

// G'' = s^{-1-alpha}, G'(1) = -1/alpha.
double G(double s, double alpha) {
    if (alpha == 1.0) return -std::log(s);
    return std::pow(s, 1.0 - alpha) / (alpha * (alpha - 1.0));
}

}  // namespace

double FracLaplacianWeights::tail(int m) const {
    if (m <= 1) return one_side_total;
    const double c = fractional_laplacian_constant(1, alpha) * std::pow(h, -alpha);
    return c * (G(m - 1, alpha) - G(m, alpha));
}

std::vector<double> FracLaplacianWeights::apply(std::span<const double> u) const {
    const int n = static_cast<int>(u.size());
    if (static_cast<int>(w.size()) < n) throw ParameterError("stencil shorter than the state vector");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double s = diagonal() * u[i];
        for (int j = 0; j < n; ++j)
            if (j != i) s += w[std::abs(i - j)] * u[j];
        out[i] = s;
    }
    return out;
}

FracLaplacianWeights assemble_frac_laplacian(const Grid1D& grid, double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) throw ParameterError("alpha must lie in (0,2)");
    grid.validate();
    FracLaplacianWeights W;
    W.alpha = alpha;
    W.h = grid.h();
    const double c = fractional_laplacian_constant(1, alpha) * std::pow(W.h, -alpha);
    W.w.assign(grid.N + 1, 0.0);
    W.w[1] = c * (1.0 / (2.0 - alpha) + G(2, alpha) - G(1, alpha) + 1.0 / alpha);
    for (int k = 2; k <= grid.N; ++k) W.w[k] = c * (G(k + 1, alpha) - 2.0 * G(k, alpha) + G(k - 1, alpha));
    W.one_side_total = c * (1.0 / (2.0 - alpha) + 1.0 / alpha);
    return W;
}

struct ImexStepper::Impl {
    int n;
    double h;
    std::vector<double> b;
    bool nonlocal;
    Eigen::LLT<Eigen::MatrixXd> llt;
};

ImexStepper::ImexStepper(const Grid1D& grid, const FracLaplacianWeights& weights, const Drift& drift, double dt,
                         bool nonlocal)
    : impl_(std::make_unique<Impl>()), dt_(dt) {
    grid.validate();
    if (drift.dim() != 1) throw ParameterError("finite-difference solver is one-dimensional");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("time step must be positive");
    const int n = grid.N;
    if (static_cast<int>(weights.w.size()) < n) throw ParameterError("stencil does not match the grid");
    impl_->n = n;
    impl_->h = grid.h();
    impl_->nonlocal = nonlocal;
    impl_->b.resize(n);
    for (int i = 0; i < n; ++i) impl_->b[i] = drift.eval1d(grid.node(i));
    const double sup_b = drift.sup_norm(Domain(Interval{grid.a, grid.b}));
    admissible_dt_ = grid.h() / (sup_b + kCflGuard);
    if (dt > admissible_dt_) {
        char msg[160];
        std::snprintf(msg, sizeof msg, "CFL violation: dt = %.6g exceeds the admissible %.6g", dt, admissible_dt_);
        throw CflViolation(msg, admissible_dt_);
    }
    if (nonlocal) {
        Eigen::MatrixXd M(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                M(i, j) = i == j ? 1.0 - dt * weights.diagonal() : -dt * weights.w[std::abs(i - j)];
        impl_->llt.compute(M);
        if (impl_->llt.info() != Eigen::Success) throw std::runtime_error("implicit operator is not positive definite");
    }
}

ImexStepper::~ImexStepper() = default;
ImexStepper::ImexStepper(ImexStepper&&) noexcept = default;
ImexStepper& ImexStepper::operator=(ImexStepper&&) noexcept = default;

std::vector<double> ImexStepper::step(std::span<const double> state, std::span<const double> f_values) const {
    const Impl& im = *impl_;
    const int n = im.n;
    if (static_cast<int>(state.size()) != n) throw ParameterError("state size does not match the grid");
    if (!f_values.empty() && static_cast<int>(f_values.size()) != n)
        throw ParameterError("source size does not match the grid");
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        const double bi = im.b[i];
        double transport = 0.0;
        if (bi > 0.0) {
            const double right = i + 1 < n ? state[i + 1] : 0.0;
            transport = bi * (right - state[i]) / im.h;
        } else if (bi < 0.0) {
            const double left = i > 0 ? state[i - 1] : 0.0;
            transport = bi * (state[i] - left) / im.h;
        }
        rhs[i] = state[i] + dt_ * (transport + (f_values.empty() ? 0.0 : f_values[i]));
    }
    Eigen::VectorXd next = im.nonlocal ? Eigen::VectorXd(im.llt.solve(rhs)) : rhs;
    return std::vector<double>(next.data(), next.data() + n);
}

std::vector<double> step_imex(std::span<const double> state, double dt, const Drift& drift,
                              std::span<const double> f_values, const Grid1D& grid,
                              const FracLaplacianWeights& weights, bool nonlocal) {
    return ImexStepper(grid, weights, drift, dt, nonlocal).step(state, f_values);
}

double GridSolution::value_at(std::size_t time_index, double x) const {
    const auto& v = values.at(time_index);
    const double h = grid.h();
    const double s = (x - grid.a) / h - 1.0;  // fractional node index
    if (!(x > grid.a && x < grid.b)) return 0.0;
    const int i = static_cast<int>(std::floor(s));
    const double t = s - i;
    const double lo = i >= 0 && i < grid.N ? v[i] : 0.0;
    const double hi = i + 1 >= 0 && i + 1 < grid.N ? v[i + 1] : 0.0;
    return (1.0 - t) * lo + t * hi;
}

void GridSolution::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot open " + path + " for writing");
    std::fputs("t", f);
    for (double x : grid.padded_nodes()) std::fprintf(f, ",%.17g", x);
    std::fputc('\n', f);
    for (std::size_t k = 0; k < times.size(); ++k) {
        std::fprintf(f, "%.17g", times[k]);
        for (int p = 0; p < grid.exterior_pad; ++p) std::fputs(",0", f);
        for (double v : values[k]) std::fprintf(f, ",%.17g", v);
        for (int p = 0; p < grid.exterior_pad; ++p) std::fputs(",0", f);
        std::fputc('\n', f);
    }
    std::fclose(f);
}

namespace {

void check_problem(const ProblemSpec& problem, const Grid1D& grid) {
    problem.validate();
    const auto* iv = std::get_if<Interval>(&problem.domain.shape());
    if (!iv || problem.law.dim() != 1) throw ParameterError("finite-difference solver needs a 1-d interval domain");
    if (std::abs(iv->a - grid.a) > 1e-12 * (1 + std::abs(iv->a)) || std::abs(iv->b - grid.b) > 1e-12 * (1 + std::abs(iv->b)))
        throw ParameterError("grid does not cover the problem's interval");
    grid.validate();
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

}  // namespace

GridSolution solve(const ProblemSpec& problem, const Grid1D& grid, double dt, double T,
                   std::vector<double> record_times) {
    check_problem(problem, grid);
    if (!(dt > 0.0)) throw ParameterError("time step must be positive");
    if (!(T >= 0.0) || !std::isfinite(T)) throw ParameterError("final time must be non-negative");
    if (record_times.empty()) record_times.push_back(T);
    std::sort(record_times.begin(), record_times.end());
    record_times.erase(std::unique(record_times.begin(), record_times.end()), record_times.end());
    if (record_times.front() < 0.0 || record_times.back() > T * (1 + 1e-12))
        throw ParameterError("record times must lie in [0, T]");

    const FracLaplacianWeights W = assemble_frac_laplacian(grid, problem.law.alpha());
    const std::vector<double> x = grid.nodes();
    std::vector<double> u(grid.N);
    for (int i = 0; i < grid.N; ++i) u[i] = problem.initial_value(std::span<const double>(&x[i], 1));

    GridSolution sol;
    sol.grid = grid;
    sol.times.push_back(0.0);
    sol.values.push_back(u);

    const bool source = !problem.f.is_zero();
    std::vector<double> fx(grid.N), fv;
    if (source)
        for (int i = 0; i < grid.N; ++i) fx[i] = problem.f.space(std::span<const double>(&x[i], 1), problem.domain);
    std::map<double, ImexStepper> steppers;
    double t = 0.0;
    for (double target : record_times) {
        const double span = target - t;
        if (span <= 0.0) continue;
        const long n = std::max(1L, static_cast<long>(std::ceil(span / dt - 1e-9)));
        const double dti = span / n;
        auto it = steppers.find(dti);
        if (it == steppers.end()) it = steppers.emplace(dti, ImexStepper(grid, W, problem.drift, dti)).first;
        for (long k = 0; k < n; ++k) {
            const double tk = t + k * dti;
            if (source) {
                fv.resize(grid.N);
                const double ht = problem.f.time(tk);
                for (int i = 0; i < grid.N; ++i) fv[i] = ht * fx[i];
            }
            std::vector<double> next = it->second.step(u, fv);
            if (!source && max_abs(next) > max_abs(u) * (1 + 1e-12) + 1e-300)
                throw std::runtime_error("discrete maximum principle violated");
            u = std::move(next);
        }
        t = target;
        sol.times.push_back(target);
        sol.values.push_back(u);
    }
    return sol;
}

std::vector<double> solve_steady(const ProblemSpec& problem, const Grid1D& grid) {
    check_problem(problem, grid);
    const FracLaplacianWeights W = assemble_frac_laplacian(grid, problem.law.alpha());
    const int n = grid.N;
    const double h = grid.h();
    Eigen::MatrixXd M(n, n);
    Eigen::VectorXd rhs(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) M(i, j) = i == j ? W.diagonal() : W.w[std::abs(i - j)];
        const double x = grid.node(i);
        const double bi = problem.drift.eval1d(x);
        if (bi > 0.0) {
            M(i, i) -= bi / h;
            if (i + 1 < n) M(i, i + 1) += bi / h;
        } else if (bi < 0.0) {
            M(i, i) += bi / h;
            if (i > 0) M(i, i - 1) -= bi / h;
        }
        rhs[i] = -problem.f.space(std::span<const double>(&x, 1), problem.domain);
    }
    Eigen::VectorXd u = M.partialPivLu().solve(rhs);
    return std::vector<double>(u.data(), u.data() + n);
}

}  // namespace nld
