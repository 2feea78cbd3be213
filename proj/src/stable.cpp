#include "nld/stable.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nld/error.hpp"

namespace nld {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 2.0)) {
        throw ParameterError("stability index must lie in (0,2), got " + std::to_string(alpha));
    }
}

void check_scale(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ParameterError("scale must be positive and finite, got " + std::to_string(scale));
    }
}

}  // namespace

StableLaw::StableLaw(double alpha, int dim) : alpha_(alpha), dim_(dim) {
    check_alpha(alpha);
    if (dim < 1) throw ParameterError("dimension must be >= 1, got " + std::to_string(dim));
}

double sample_sym_stable_1d(double alpha, double scale, RngStream& stream) {
    check_alpha(alpha);
    check_scale(scale);
    const double v = std::numbers::pi * (stream.uniform() - 0.5);
    const double w = stream.exponential();
    double s;
    if (alpha == 1.0) {
        s = std::tan(v);
        return scale * s;
    }
    const double log_mag = -std::log(std::cos(v)) / alpha +
                           (1.0 - alpha) / alpha * (std::log(std::cos((1.0 - alpha) * v)) - std::log(w));
    s = std::sin(alpha * v) * std::exp(log_mag);
    return std::pow(scale, 1.0 / alpha) * s;
}

double sample_pos_stable(double alpha_half, double scale, RngStream& stream) {
    if (!(alpha_half > 0.0 && alpha_half < 1.0)) {
        throw ParameterError("one-sided stable index must lie in (0,1), got " +
                             std::to_string(alpha_half));
    }
    check_scale(scale);
    const double a = alpha_half;
    const double u = std::numbers::pi * stream.uniform();
    const double w = stream.exponential();
    const double log_s = std::log(std::sin(a * u)) - std::log(std::sin(u)) / a +
                         (1.0 - a) / a * (std::log(std::sin((1.0 - a) * u)) - std::log(w));
    return std::exp(log_s + std::log(scale) / a);
}

void sample_isotropic_increment(const StableLaw& law, double dt, RngStream& stream,
                                std::span<double> out) {
    if (static_cast<int>(out.size()) != law.dim()) {
        throw ParameterError("output span size does not match the law's dimension");
    }
    const double subordinator = sample_pos_stable(0.5 * law.alpha(), dt, stream);
    const double radius = std::sqrt(2.0 * subordinator);
    for (double& component : out) component = radius * stream.normal();
}

std::vector<double> sample_isotropic_increment(const StableLaw& law, double dt, RngStream& stream) {
    std::vector<double> out(static_cast<std::size_t>(law.dim()));
    sample_isotropic_increment(law, dt, stream, out);
    return out;
}

}  // namespace nld
