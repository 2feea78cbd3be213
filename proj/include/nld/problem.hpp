#pragma once

#include <span>
#include <string>
#include <vector>

#include "nld/domain.hpp"
#include "nld/stable.hpp"

namespace nld {

/// Data functions for the initial value phi and the source f.
///   zero, constant(c), sin_affine(a,b) = 1_D(x) sin(a pi x_1 + b),
///   polynomial(coeffs) = sum_k coeffs[k] x_1^k,
/// optionally multiplied by a time factor h(t) in {1, exp(-lambda t)}.
class DataFunction {
public:
    enum class Kind { Zero, Constant, SinAffine, Polynomial };
    enum class TimeFactor { One, Exp };

    static DataFunction zero() { return DataFunction(Kind::Zero, {}); }
    static DataFunction constant(double c) { return DataFunction(Kind::Constant, {c}); }
    static DataFunction sin_affine(double a, double b) { return DataFunction(Kind::SinAffine, {a, b}); }
    static DataFunction polynomial(std::vector<double> coeffs) {
        return DataFunction(Kind::Polynomial, std::move(coeffs));
    }

    /// Returns a copy multiplied by exp(-lambda t).
    DataFunction with_exp_decay(double lambda) const;

    Kind kind() const noexcept { return kind_; }
    const std::vector<double>& params() const noexcept { return params_; }
    TimeFactor time_factor() const noexcept { return time_factor_; }
    double decay_rate() const noexcept { return decay_rate_; }
    bool is_zero() const noexcept { return kind_ == Kind::Zero; }

    /// Spatial part g(x). sin_affine carries its own indicator of D.
    double space(std::span<const double> x, const Domain& domain) const;
    double space1d(double x, const Domain& domain) const;
    /// h(t).
    double time(double t) const;
    double operator()(double t, std::span<const double> x, const Domain& domain) const {
        return time(t) * space(x, domain);
    }

    /// sup over D of |g| (crude but exact for the catalog on intervals).
    double sup_norm(const Domain& domain) const;

    std::string describe() const;

private:
    DataFunction(Kind kind, std::vector<double> params) : kind_(kind), params_(std::move(params)) {}

    Kind kind_;
    std::vector<double> params_;
    TimeFactor time_factor_ = TimeFactor::One;
    double decay_rate_ = 0.0;
};

/// The nonlocal Dirichlet problem
///   d_t u = Delta^{alpha/2} u + b . grad u + f  on (0,inf) x D,
///   u = 0 on D^c,  u(0) = phi on D.
struct ProblemSpec {
    Domain domain;
    Drift drift;
    StableLaw law;
    DataFunction phi = DataFunction::zero();
    DataFunction f = DataFunction::zero();

    /// Throws ParameterError when the dimensions of the parts disagree.
    void validate() const;

    /// phi(x) 1_D(x): the exterior condition is built in.
    double initial_value(std::span<const double> x) const {
        return domain.contains(x) ? phi.space(x, domain) : 0.0;
    }
};

}  // namespace nld
