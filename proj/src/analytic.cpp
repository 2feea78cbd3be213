#include "nld/analytic.hpp"

#include <cmath>
#include <numbers>

#include "nld/error.hpp"

namespace nld {

double fractional_laplacian_constant(int dim, double alpha) {
    const double d = dim;
    return alpha * std::pow(2.0, alpha - 1.0) * std::tgamma(0.5 * (d + alpha)) /
           (std::pow(std::numbers::pi, 0.5 * d) * std::tgamma(1.0 - 0.5 * alpha));
}

double getoor_mean_exit_time(int dim, double alpha, double radius, double abs_x) {
    if (abs_x >= radius) return 0.0;
    const double d = dim;
    const double c = std::tgamma(0.5 * d) /
                     (std::pow(2.0, alpha) * std::tgamma(1.0 + 0.5 * alpha) * std::tgamma(0.5 * (d + alpha)));
    return c * std::pow(radius * radius - abs_x * abs_x, 0.5 * alpha);
}

double dyda_constant(int dim, double alpha) {
    const double d = dim;
    return std::pow(2.0, alpha) * std::tgamma(1.0 + 0.5 * alpha) * std::tgamma(0.5 * (d + alpha)) /
           std::tgamma(0.5 * d);
}

double unit_sphere_area(int n) {
    if (n < 1) throw ParameterError("sphere dimension must be >= 1");
    const double half = 0.5 * n;
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
}

}  // namespace nld
