#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "nld/domain.hpp"
#include "nld/problem.hpp"

namespace nld {

/// N interior nodes a + (i+1) h of (a,b), h = (b-a)/(N+1). The exterior is
/// identically zero; `exterior_pad` ghost nodes on each side are only carried
/// into output.
struct Grid1D {
    double a = 0.0;
    double b = 1.0;
    int N = 0;
    int exterior_pad = 0;

    static Grid1D make(double a, double b, int N, int exterior_pad = 0);
    void validate() const;
    double h() const { return (b - a) / (N + 1); }
    double node(int i) const { return a + (i + 1) * h(); }
    std::vector<double> nodes() const;
    /// Interior nodes plus the ghost nodes on both sides.
    std::vector<double> padded_nodes() const;
};

/// Symmetric Toeplitz stencil of Delta^{alpha/2} (constant C_{1,alpha}
/// included): (Lu)_i = sum_{k != 0} w_{|k|} (u_{i+k} - u_i) over all integers
/// k, with u = 0 off the grid. Near field |z| < h uses the quadratic model,
/// the far field the piecewise linear interpolant integrated exactly.
struct FracLaplacianWeights {
    double alpha = 1.0;
    double h = 1.0;
    std::vector<double> w;  ///< w[k] for k = 0..N; w[0] = 0
    double one_side_total = 0.0;  ///< sum_{k>=1} w_k over all k

    /// sum_{k>=m} w_k, the mass of the stencil beyond offset m-1.
    double tail(int m) const;
    /// Diagonal entry -2 sum_{k>=1} w_k.
    double diagonal() const { return -2.0 * one_side_total; }
    /// L u on the grid with zero exterior.
    std::vector<double> apply(std::span<const double> u) const;
};

FracLaplacianWeights assemble_frac_laplacian(const Grid1D& grid, double alpha);

/// One IMEX step  u' = (I - dt L)^{-1} (u + dt (B u + f))  with B the
/// first-order upwind drift operator. The factorization is built once.
class ImexStepper {
public:
    /// `nonlocal = false` drops the fractional part (test mode).
    ImexStepper(const Grid1D& grid, const FracLaplacianWeights& weights, const Drift& drift, double dt,
                bool nonlocal = true);
    ~ImexStepper();
    ImexStepper(ImexStepper&&) noexcept;
    ImexStepper& operator=(ImexStepper&&) noexcept;

    std::vector<double> step(std::span<const double> state, std::span<const double> f_values) const;

    double dt() const { return dt_; }
    /// h / (max node |b| + guard).
    double admissible_dt() const { return admissible_dt_; }

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    double dt_;
    double admissible_dt_;
};

inline constexpr double kCflGuard = 1e-12;

/// Single step; factorizes on every call. Throws CflViolation when
/// dt > h / (sup |b| + guard).
std::vector<double> step_imex(std::span<const double> state, double dt, const Drift& drift,
                              std::span<const double> f_values, const Grid1D& grid,
                              const FracLaplacianWeights& weights, bool nonlocal = true);

struct GridSolution {
    Grid1D grid;
    std::vector<double> times;
    std::vector<std::vector<double>> values;  ///< values[time][node]

    /// Linear interpolation in x at a recorded time index; 0 outside (a,b).
    double value_at(std::size_t time_index, double x) const;
    /// Header "t,<node coordinates>", one row per time; ghost nodes included.
    void write_csv(const std::string& path) const;
};

/// Time stepping of the problem on [0,T]. Steps are shortened so that every
/// record time (default: just T) is hit exactly.
GridSolution solve(const ProblemSpec& problem, const Grid1D& grid, double dt, double T,
                   std::vector<double> record_times = {});

/// Stationary solution of L u + b u' + f = 0 with time-independent f.
std::vector<double> solve_steady(const ProblemSpec& problem, const Grid1D& grid);

}  // namespace nld
