#pragma once

#include <span>
#include <string>
#include <utility>
#include <variant>

namespace nld {

/// Jump-kernel modulation kappa(|z|) multiplying |z|^{-d-alpha}.
/// Radial kernels have the form outer + (inner - outer) exp(-r / transition).
struct KernelSpec {
    enum class Kind { Constant, Radial };

    Kind kind = Kind::Constant;
    double inner = 1.0;
    double outer = 1.0;
    double transition = 1.0;

    static KernelSpec constant() { return {}; }
    static KernelSpec radial(double inner, double outer, double transition);

    double operator()(double r) const;
    double at_infinity() const { return kind == Kind::Constant ? 1.0 : outer; }
    /// Smallest kappa0 with kappa0^{-1} <= kappa <= kappa0.
    double kappa0() const;
    /// Checks the two-sided bound on a dense sample of radii.
    void validate() const;
    std::string describe() const;
};

/// Barrier (x_1)_+^theta.
struct HalfSpaceBarrier {};
/// Barrier (|x| - radius)_+^theta around the origin.
struct BallExteriorBarrier {
    double radius = 1.0;
};
/// Barrier dist(x, R \ (a,b))^theta; one-dimensional only.
struct IntervalBarrier {
    double a = 0.0;
    double b = 1.0;
};
/// g == value everywhere. Degenerate test mode.
struct ConstantBarrier {
    double value = 1.0;
};

struct BarrierSpec {
    using Geometry = std::variant<HalfSpaceBarrier, BallExteriorBarrier, IntervalBarrier, ConstantBarrier>;

    Geometry geometry = HalfSpaceBarrier{};
    double theta = 0.5;

    void validate(double alpha) const;
    std::string geometry_name() const;
};

/// `split_radius` and `outer_cutoff` are measured in units of the distance
/// from x to the zero set of the barrier.
struct QuadratureConfig {
    double split_radius = 0.01;
    double rel_tol = 1e-10;
    double abs_tol = 1e-10;
    double outer_cutoff = 1e6;
    int max_panels = 4000;
    /// Treat the inner ball by the symmetric second-order expansion for
    /// alpha < 1 as well (by default that range is integrated uncompensated).
    bool symmetric_inner = false;

    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double err_bound = 0.0;
    long evaluations = 0;
};

/// L g(x) = int (g(x+z) - g(x) - compensator) kappa(|z|) |z|^{-d-alpha} dz for
/// the barrier g, with d = x.size(). The compensator is absent for alpha < 1
/// and symmetric otherwise. The constant C_{d,alpha} is not included.
QuadratureResult frac_laplacian_barrier(const BarrierSpec& barrier, const KernelSpec& kernel, double alpha,
                                        std::span<const double> x, const QuadratureConfig& cfg = {});

/// One-dimensional shortcut.
QuadratureResult frac_laplacian_barrier(const BarrierSpec& barrier, const KernelSpec& kernel, double alpha, double x,
                                        const QuadratureConfig& cfg = {});

/// (value at distance R, R^{theta-alpha} * value at distance 1). The geometry
/// is dilated by R for the first component.
std::pair<double, double> barrier_scaling_check(const BarrierSpec& barrier, double alpha, double R,
                                                const KernelSpec& kernel = {}, int dim = 1,
                                                const QuadratureConfig& cfg = {});

/// theta in (0, alpha) where the half-space barrier value at distance 1
/// changes sign, by bisection.
double find_sign_threshold(double alpha, const KernelSpec& kernel, const QuadratureConfig& cfg = {},
                           double theta_tol = 1e-6);

}  // namespace nld
