#include "nld/domain.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>

#include "nld/error.hpp"

namespace nld {

namespace {

double norm(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

double dot(std::span<const double> u, std::span<const double> v) {
    return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
}

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Domain::Domain(Variant shape) : shape_(std::move(shape)), dim_(1) {
    std::visit(Overloaded{
                   [&](const Interval& s) {
                       if (!(s.a < s.b)) throw ParameterError("interval requires a < b");
                       dim_ = 1;
                   },
                   [&](const Ball& s) {
                       if (s.center.empty()) throw ParameterError("ball centre must be non-empty");
                       if (!(s.radius > 0.0)) throw ParameterError("ball radius must be positive");
                       dim_ = static_cast<int>(s.center.size());
                   },
                   [&](const HalfSpace& s) {
                       if (s.normal.empty()) throw ParameterError("half-space normal must be non-empty");
                       if (std::abs(norm(s.normal) - 1.0) > 1e-12) {
                           throw ParameterError("half-space normal must have unit norm");
                       }
                       dim_ = static_cast<int>(s.normal.size());
                   },
               },
               shape_);
}

double Domain::diameter() const {
    return std::visit(Overloaded{
                          [](const Interval& s) { return s.b - s.a; },
                          [](const Ball& s) { return 2.0 * s.radius; },
                          [](const HalfSpace&) -> double {
                              throw ParameterError("half-space is unbounded; diameter undefined");
                          },
                      },
                      shape_);
}

double Domain::signed_distance(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dim_) throw ParameterError("point dimension mismatch");
    return std::visit(Overloaded{
                          [&](const Interval& s) { return std::min(x[0] - s.a, s.b - x[0]); },
                          [&](const Ball& s) {
                              double r2 = 0.0;
                              for (std::size_t i = 0; i < x.size(); ++i) {
                                  const double d = x[i] - s.center[i];
                                  r2 += d * d;
                              }
                              return s.radius - std::sqrt(r2);
                          },
                          [&](const HalfSpace& s) { return dot(s.normal, x) - s.offset; },
                      },
                      shape_);
}

double Domain::signed_distance(double x) const {
    if (const auto* s = std::get_if<Interval>(&shape_)) return std::min(x - s->a, s->b - x);
    return signed_distance(std::span<const double>(&x, 1));
}

Point Domain::outward_normal(std::span<const double> z, double tol) const {
    const double sd = signed_distance(z);
    if (std::abs(sd) > tol) {
        throw ParameterError("point is not on the boundary (signed distance " + std::to_string(sd) + ")");
    }
    return std::visit(Overloaded{
                          [&](const Interval& s) -> Point {
                              return {std::abs(z[0] - s.a) <= std::abs(z[0] - s.b) ? -1.0 : 1.0};
                          },
                          [&](const Ball& s) -> Point {
                              Point n(z.begin(), z.end());
                              for (std::size_t i = 0; i < n.size(); ++i) n[i] -= s.center[i];
                              const double len = norm(n);
                              for (double& c : n) c /= len;
                              return n;
                          },
                          [&](const HalfSpace& s) -> Point {
                              Point n = s.normal;
                              for (double& c : n) c = -c;
                              return n;
                          },
                      },
                      shape_);
}

std::vector<std::string> Domain::boundary_components() const {
    return std::visit(Overloaded{
                          [](const Interval&) { return std::vector<std::string>{"left", "right"}; },
                          [](const Ball&) { return std::vector<std::string>{"sphere"}; },
                          [](const HalfSpace&) { return std::vector<std::string>{"plane"}; },
                      },
                      shape_);
}

double Domain::distance_to_component(std::span<const double> x, std::size_t k) const {
    if (const auto* s = std::get_if<Interval>(&shape_)) {
        if (k > 1) throw ParameterError("interval has two boundary components");
        return std::abs(x[0] - (k == 0 ? s->a : s->b));
    }
    if (k != 0) throw ParameterError("domain has a single boundary component");
    return std::abs(signed_distance(x));
}

Drift::Drift(int dim, std::vector<double> matrix_row_major, std::vector<double> offset)
    : dim_(dim), matrix_(std::move(matrix_row_major)), offset_(std::move(offset)) {
    if (dim < 1) throw ParameterError("drift dimension must be >= 1");
    if (matrix_.size() != static_cast<std::size_t>(dim * dim) || offset_.size() != static_cast<std::size_t>(dim)) {
        throw ParameterError("drift matrix/offset sizes do not match dimension");
    }
}

Drift Drift::zero(int dim) {
    Drift d(dim, std::vector<double>(dim * dim, 0.0), std::vector<double>(dim, 0.0));
    d.preset_ = "zero";
    return d;
}

Drift Drift::constant_one(int dim) {
    std::vector<double> c(dim, 0.0);
    c[0] = 1.0;
    Drift d(dim, std::vector<double>(dim * dim, 0.0), std::move(c));
    d.preset_ = "constant-one";
    return d;
}

Drift Drift::example13() {
    Drift d(1, {1.0}, {-0.5});
    d.preset_ = "example13";
    return d;
}

Drift Drift::mirror13() {
    Drift d(1, {-1.0}, {0.5});
    d.preset_ = "mirror13";
    return d;
}

Drift Drift::minus_x() {
    Drift d(1, {-1.0}, {0.0});
    d.preset_ = "minusx";
    return d;
}

Drift Drift::preset(const std::string& name, int dim) {
    if (name == "zero") return zero(dim);
    if (name == "constant-one") return constant_one(dim);
    if (dim != 1) throw ParameterError("preset '" + name + "' is one-dimensional");
    if (name == "example13") return example13();
    if (name == "mirror13") return mirror13();
    if (name == "minusx") return minus_x();
    throw ParameterError("unknown drift preset '" + name + "'");
}

void Drift::eval(std::span<const double> x, std::span<double> out) const {
    for (int i = 0; i < dim_; ++i) {
        double s = offset_[i];
        for (int j = 0; j < dim_; ++j) s += matrix_[i * dim_ + j] * x[j];
        out[i] = s;
    }
}

Point Drift::operator()(std::span<const double> x) const {
    Point out(dim_);
    eval(x, out);
    return out;
}

bool Drift::is_zero() const noexcept {
    for (double v : matrix_) if (v != 0.0) return false;
    for (double v : offset_) if (v != 0.0) return false;
    return true;
}

double Drift::sup_norm(const Domain& domain) const {
    if (domain.dim() != dim_) throw ParameterError("drift and domain dimensions differ");
    if (const auto* s = std::get_if<Interval>(&domain.shape())) {
        return std::max(std::abs(eval1d(s->a)), std::abs(eval1d(s->b)));
    }
    if (const auto* s = std::get_if<Ball>(&domain.shape())) {
        Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> a(
            matrix_.data(), dim_, dim_);
        const Point at_centre = (*this)(s->center);
        const double op_norm = a.jacobiSvd().singularValues()(0);
        return norm(at_centre) + op_norm * s->radius;
    }
    for (double v : matrix_) {
        if (v != 0.0) throw ParameterError("non-constant affine drift is unbounded on a half-space");
    }
    return norm(offset_);
}

Drift Drift::scaled(double factor) const {
    std::vector<double> a = matrix_, c = offset_;
    for (double& v : a) v *= factor;
    for (double& v : c) v *= factor;
    return Drift(dim_, std::move(a), std::move(c));
}

std::string to_string(BoundaryLabel label) {
    switch (label) {
        case BoundaryLabel::GammaLess: return "GammaLess";
        case BoundaryLabel::GammaEq: return "GammaEq";
        case BoundaryLabel::GammaGreater: return "GammaGreater";
    }
    return "?";
}

BoundaryClass classify_boundary(const Domain& domain, const Drift& drift, std::span<const double> z,
                                double tol) {
    if (tol < 0.0) throw ParameterError("classification tolerance must be non-negative");
    const Point n = domain.outward_normal(z);
    const Point b = drift(z);
    const double value = dot(b, n);
    if (std::abs(value) <= tol) return {BoundaryLabel::GammaEq, value};
    return {value > 0.0 ? BoundaryLabel::GammaGreater : BoundaryLabel::GammaLess, value};
}

}  // namespace nld
