#pragma once

#include <span>
#include <vector>

#include "nld/rng.hpp"

namespace nld {

/// Isotropic symmetric alpha-stable law in R^dim, normalized so that the
/// increment over time t has characteristic function exp(-t |xi|^alpha).
class StableLaw {
public:
    StableLaw(double alpha, int dim);

    double alpha() const noexcept { return alpha_; }
    int dim() const noexcept { return dim_; }

private:
    double alpha_;
    int dim_;
};

/// One draw of scale^{1/alpha} * S with E exp(i xi S) = exp(-|xi|^alpha)
/// (Chambers-Mallows-Stuck; alpha = 1 takes the Cauchy branch).
double sample_sym_stable_1d(double alpha, double scale, RngStream& stream);

/// One draw of the positive stable law with Laplace transform
/// exp(-scale * lambda^alpha_half), alpha_half in (0,1) (Kanter's representation).
double sample_pos_stable(double alpha_half, double scale, RngStream& stream);

/// Increment of the rotationally invariant alpha-stable process over time dt,
/// by subordination: sqrt(2 S) G with S ~ pos_stable(alpha/2, dt), G ~ N(0, I).
void sample_isotropic_increment(const StableLaw& law, double dt, RngStream& stream,
                                std::span<double> out);
std::vector<double> sample_isotropic_increment(const StableLaw& law, double dt, RngStream& stream);

}  // namespace nld
