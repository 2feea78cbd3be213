#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "nld/error.hpp"
#include "nld/quadrature.hpp"

using namespace nld;
using boost::math::tgamma;

namespace {

/// L (x_+)^theta at x = 1 in one dimension with kappa = 1, from the Beta
/// integrals of the two half lines (valid for alpha != 1).
double half_line_closed_form(double alpha, double theta) {
    return tgamma(-alpha) * (tgamma(theta + 1) / tgamma(theta + 1 - alpha) + tgamma(alpha - theta) / tgamma(-theta));
}

/// Integrating out the d-1 tangential directions multiplies the 1D value by this.
double tangential_factor(int d, double alpha) {
    return std::pow(std::numbers::pi, (d - 1) / 2.0) * tgamma((1 + alpha) / 2) / tgamma((d + alpha) / 2);
}

const double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("half line against the closed form") {
    for (double alpha : {0.3, 0.5, 0.9, 1.2, 1.5, 1.8})
        for (double f : {0.1, 0.25, 0.5, 0.75, 0.9}) {
            const double theta = f * alpha;
            const auto r = frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, theta}, {}, alpha, 1.0);
            CAPTURE(alpha);
            CAPTURE(theta);
            CHECK(std::abs(r.value - half_line_closed_form(alpha, theta)) < 1e-9);
            CHECK(r.err_bound < 1e-8);
        }
}

TEST_CASE("alpha = 1 limit of the closed form") {
    // Limit alpha -> 1 of the Beta-integral expression: -pi theta cot(pi theta).
    for (double theta : {0.1, 0.25, 0.3, 0.5, 0.8}) {
        const auto r = frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, theta}, {}, 1.0, 1.0);
        const double expected = -kPi * theta * std::cos(kPi * theta) / std::sin(kPi * theta);
        CAPTURE(theta);
        CHECK(std::abs(r.value - expected) < 1e-9);
    }
}

TEST_CASE("half space in higher dimensions reduces to the half line") {
    for (int d : {2, 3})
        for (double alpha : {0.5, 1.5}) {
            const double theta = alpha / 4;
            std::vector<double> x(d, 0.3);
            x[0] = 1.0;
            const auto r = frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, theta}, {}, alpha, x);
            CAPTURE(d);
            CAPTURE(alpha);
            CHECK(r.value ==
                  doctest::Approx(tangential_factor(d, alpha) * half_line_closed_form(alpha, theta)).epsilon(1e-7));
        }
}

TEST_CASE("sign pattern and threshold at alpha / 2") {
    for (double alpha : {0.5, 1.0, 1.5}) {
        const auto lo = frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, alpha / 4}, {}, alpha, 1.0);
        const auto hi = frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, 3 * alpha / 4}, {}, alpha, 1.0);
        CHECK(lo.value < 0.0);
        CHECK(hi.value > 0.0);
        CHECK(find_sign_threshold(alpha, {}) == doctest::Approx(alpha / 2).epsilon(1e-5));
    }
}

TEST_CASE("negativity persists for a modulated kernel") {
    const KernelSpec k = KernelSpec::radial(2.0, 0.5, 1.0);
    for (double alpha : {0.5, 1.0, 1.5}) {
        const double thr = find_sign_threshold(alpha, k);
        CHECK(thr > 0.0);
        CHECK(thr < alpha);
        for (double f : {0.25, 0.5, 0.9}) {
            const double theta = f * thr;
            CHECK(frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, theta}, k, alpha, 1.0).value < 0.0);
        }
    }
}

TEST_CASE("linearity in the kernel") {
    const KernelSpec twice = KernelSpec::radial(2.0, 2.0, 1.0);
    for (double alpha : {0.6, 1.4}) {
        const BarrierSpec b{HalfSpaceBarrier{}, 0.3 * alpha};
        const double one = frac_laplacian_barrier(b, {}, alpha, 1.0).value;
        CHECK(frac_laplacian_barrier(b, twice, alpha, 1.0).value == doctest::Approx(2 * one).epsilon(1e-9));
    }
}

TEST_CASE("scaling of the half space and the ball") {
    for (double alpha : {0.7, 1.3}) {
        const auto [at_r, scaled] = barrier_scaling_check(BarrierSpec{HalfSpaceBarrier{}, 0.3}, alpha, 2.5);
        CHECK(at_r == doctest::Approx(scaled).epsilon(1e-9));
        const auto [ball_r, ball_scaled] =
            barrier_scaling_check(BarrierSpec{BallExteriorBarrier{1.0}, 0.3}, alpha, 2.5, {}, 2);
        CHECK(ball_r == doctest::Approx(ball_scaled).epsilon(1e-7));
    }
}

TEST_CASE("large balls approach the half space") {
    const double theta = 0.3;
    for (double alpha : {0.7, 1.3}) {
        const double plane = tangential_factor(2, alpha) * half_line_closed_form(alpha, theta);
        double previous = 1e300;
        for (double r : {1.0, 10.0, 100.0, 1000.0}) {
            const std::vector<double> x{r + 1, 0.0};
            const double v = frac_laplacian_barrier(BarrierSpec{BallExteriorBarrier{r}, theta}, {}, alpha, x).value;
            const double gap = std::abs(v - plane);
            CHECK(gap < previous);
            previous = gap;
        }
        if (alpha > 1) CHECK(previous < 0.01 * std::abs(plane));
    }
}

TEST_CASE("refinement stays within the reported bound") {
    const BarrierSpec b{IntervalBarrier{-1.0, 1.0}, 0.6};
    QuadratureConfig loose;
    loose.abs_tol = loose.rel_tol = 1e-6;
    const auto coarse = frac_laplacian_barrier(b, {}, 1.2, 0.3, loose);
    const auto fine = frac_laplacian_barrier(b, {}, 1.2, 0.3);
    CHECK(std::abs(coarse.value - fine.value) <= coarse.err_bound + fine.err_bound);
    CHECK(frac_laplacian_barrier(b, {}, 1.2, -0.3).value == doctest::Approx(fine.value).epsilon(1e-9));
}

TEST_CASE("constant barrier is annihilated") {
    CHECK(std::abs(frac_laplacian_barrier(BarrierSpec{ConstantBarrier{2.0}, 0.1}, {}, 1.2, 0.3).value) < 1e-12);
    CHECK(std::abs(frac_laplacian_barrier(BarrierSpec{ConstantBarrier{-1.0}, 0.1}, {}, 0.4, 0.3).value) < 1e-12);
}

TEST_CASE("invalid inputs") {
    CHECK_THROWS_AS(frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, 0.6}, {}, 0.5, 1.0), ParameterError);
    CHECK_THROWS_AS(frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, 0.2}, {}, 0.5, -1.0), ParameterError);
    CHECK_THROWS_AS(frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, 0.2}, {}, 2.0, 1.0), ParameterError);
    CHECK_THROWS_AS(KernelSpec::radial(-1.0, 1.0, 1.0).validate(), ParameterError);
    QuadratureConfig bad;
    bad.split_radius = 2.0;
    CHECK_THROWS_AS(frac_laplacian_barrier(BarrierSpec{HalfSpaceBarrier{}, 0.2}, {}, 0.5, 1.0, bad), ParameterError);
}
