#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

namespace nld {

using Point = std::vector<double>;

struct Interval {
    double a;
    double b;
};

struct Ball {
    Point center;
    double radius;
};

/// {x : normal . x > offset}; `normal` is the inward unit normal.
struct HalfSpace {
    Point normal;
    double offset;
};

/// Open set D on which the Dirichlet problem is posed.
class Domain {
public:
    using Variant = std::variant<Interval, Ball, HalfSpace>;

    explicit Domain(Variant shape);

    const Variant& shape() const noexcept { return shape_; }
    int dim() const noexcept { return dim_; }
    bool bounded() const noexcept { return !std::holds_alternative<HalfSpace>(shape_); }

    /// diam(D); throws ParameterError for unbounded domains.
    double diameter() const;

    /// Positive inside D (distance to D^c), negative outside, zero on the boundary.
    double signed_distance(std::span<const double> x) const;
    double signed_distance(double x) const;  // 1-d shortcut
    bool contains(std::span<const double> x) const { return signed_distance(x) > 0.0; }

    /// Unit outward normal at a boundary point; rejects points farther than
    /// `tol` from the boundary.
    Point outward_normal(std::span<const double> z, double tol = 1e-9) const;

    /// Boundary components: {"left", "right"} for an interval, {"sphere"} for a
    /// ball and {"plane"} for a half-space.
    std::vector<std::string> boundary_components() const;

    /// Unsigned distance from x to boundary component `k`.
    double distance_to_component(std::span<const double> x, std::size_t k) const;

private:
    Variant shape_;
    int dim_;
};

/// Affine drift b(x) = A x + c. Named presets cover the one-dimensional
/// experiments on (0,1).
class Drift {
public:
    Drift(int dim, std::vector<double> matrix_row_major, std::vector<double> offset);

    static Drift zero(int dim);
    static Drift constant_one(int dim);  ///< b = e_1
    static Drift example13();            ///< b(x) = x - 1/2
    static Drift mirror13();             ///< b(x) = 1/2 - x
    static Drift minus_x();              ///< b(x) = -x
    /// Preset by name: "zero", "constant-one", "example13", "mirror13", "minusx".
    static Drift preset(const std::string& name, int dim = 1);

    int dim() const noexcept { return dim_; }
    const std::vector<double>& matrix() const noexcept { return matrix_; }
    const std::vector<double>& offset() const noexcept { return offset_; }
    const std::string& preset_name() const noexcept { return preset_; }

    void eval(std::span<const double> x, std::span<double> out) const;
    Point operator()(std::span<const double> x) const;
    double eval1d(double x) const noexcept { return matrix_[0] * x + offset_[0]; }
    bool is_zero() const noexcept;

    /// sup over D of |b|. Exact on intervals and for scalar A on balls; for a
    /// general matrix on a ball it is the bound |A x0 + c| + ||A||_2 r.
    double sup_norm(const Domain& domain) const;

    /// Same field multiplied by a positive constant.
    Drift scaled(double factor) const;

private:
    int dim_;
    std::vector<double> matrix_;
    std::vector<double> offset_;
    std::string preset_;
};

enum class BoundaryLabel { GammaLess, GammaEq, GammaGreater };

std::string to_string(BoundaryLabel label);

struct BoundaryClass {
    BoundaryLabel label;
    double value;  ///< b(z) . n(z)
};

inline constexpr double kDefaultClassificationTol = 1e-12;

/// Sign of b(z).n(z) at a boundary point, with |b.n| <= tol counted as zero.
BoundaryClass classify_boundary(const Domain& domain, const Drift& drift, std::span<const double> z,
                                double tol = kDefaultClassificationTol);

}  // namespace nld
