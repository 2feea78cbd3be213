#pragma once

// Closed forms for the isotropic alpha-stable process with characteristic
// function exp(-t|xi|^alpha), i.e. generator Delta^{alpha/2} = -(-Delta)^{alpha/2}.

namespace nld {

/// C_{d,alpha} in Delta^{alpha/2} u(x) = C_{d,alpha} PV int (u(x+z) - u(x)) |z|^{-d-alpha} dz.
double fractional_laplacian_constant(int dim, double alpha);

/// Mean exit time from the ball B_r(0) started at distance `abs_x` from the centre:
/// E tau = Gamma(d/2) / (2^alpha Gamma(1+alpha/2) Gamma((d+alpha)/2)) (r^2 - |x|^2)^{alpha/2}.
double getoor_mean_exit_time(int dim, double alpha, double radius, double abs_x);

/// K with Delta^{alpha/2} (1 - |x|^2)_+^{alpha/2} = -K on the unit ball:
/// K = 2^alpha Gamma(1+alpha/2) Gamma((d+alpha)/2) / Gamma(d/2).
double dyda_constant(int dim, double alpha);

/// Surface area of the unit sphere S^{n-1} in R^n (n >= 1; |S^0| = 2).
double unit_sphere_area(int n);

}  // namespace nld
