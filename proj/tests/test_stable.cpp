#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/cauchy.hpp>

#include "nld/error.hpp"
#include "nld/stable.hpp"

namespace {

/// Kolmogorov-Smirnov statistic of a sample against a cdf.
template <class Cdf>
double ks_statistic(std::vector<double> xs, Cdf cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return d;
}

/// Asymptotic Kolmogorov tail probability P(sqrt(n) D > lambda).
double ks_pvalue(double d, std::size_t n) {
    const double lambda = (std::sqrt(static_cast<double>(n)) + 0.12 + 0.11 / std::sqrt(static_cast<double>(n))) * d;
    double p = 0;
    for (int k = 1; k <= 100; ++k) p += 2 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace

TEST_CASE("alpha = 1 is the standard Cauchy law") {
    nld::RngStream s(11, 0);
    std::vector<double> xs;
    for (int i = 0; i < 20000; ++i) xs.push_back(nld::sample_sym_stable_1d(1.0, 1.0, s));
    boost::math::cauchy_distribution<double> c(0.0, 1.0);
    const double d = ks_statistic(xs, [&](double x) { return boost::math::cdf(c, x); });
    CHECK(ks_pvalue(d, xs.size()) > 1e-3);
}

TEST_CASE("time scaling of the one-dimensional sampler") {
    const double alpha = 1.3, t = 0.2;
    nld::RngStream a(5, 1), b(5, 1);
    for (int i = 0; i < 50; ++i)
        CHECK(nld::sample_sym_stable_1d(alpha, t, a) ==
              doctest::Approx(std::pow(t, 1 / alpha) * nld::sample_sym_stable_1d(alpha, 1.0, b)).epsilon(1e-12));
}

TEST_CASE("empirical characteristic function matches exp(-|xi|^alpha)") {
    for (double alpha : {0.5, 1.0, 1.5, 1.9}) {
        nld::RngStream s(13, static_cast<std::uint64_t>(alpha * 10));
        const int n = 100000;
        std::vector<double> xs(n);
        for (double& x : xs) x = nld::sample_sym_stable_1d(alpha, 1.0, s);
        for (double xi : {0.3, 1.0, 2.0}) {
            double acc = 0;
            for (double x : xs) acc += std::cos(xi * x);
            CAPTURE(alpha);
            CAPTURE(xi);
            CHECK(std::abs(acc / n - std::exp(-std::pow(xi, alpha))) < 0.01);
        }
    }
}

TEST_CASE("positive stable Laplace transform") {
    for (double a : {0.25, 0.5, 0.75}) {
        nld::RngStream s(17, static_cast<std::uint64_t>(a * 100));
        const int n = 100000;
        std::vector<double> xs(n);
        for (double& x : xs) {
            x = nld::sample_pos_stable(a, 1.0, s);
            REQUIRE(x > 0.0);
        }
        for (double lambda : {0.5, 1.0, 3.0}) {
            double acc = 0;
            for (double x : xs) acc += std::exp(-lambda * x);
            CAPTURE(a);
            CHECK(std::abs(acc / n - std::exp(-std::pow(lambda, a))) < 0.01);
        }
    }
}

TEST_CASE("isotropic increment in two dimensions") {
    const double alpha = 1.2, dt = 0.5;
    const nld::StableLaw law(alpha, 2);
    nld::RngStream s(19, 0);
    const int n = 100000;
    double along = 0, rotated = 0;
    const double xi = 1.5;
    for (int i = 0; i < n; ++i) {
        const auto z = nld::sample_isotropic_increment(law, dt, s);
        along += std::cos(xi * z[0]);
        rotated += std::cos(xi * (z[0] + z[1]) / std::sqrt(2.0));
    }
    const double expected = std::exp(-dt * std::pow(xi, alpha));
    CHECK(std::abs(along / n - expected) < 0.01);
    CHECK(std::abs(rotated / n - expected) < 0.01);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(nld::StableLaw(0.0, 1), nld::ParameterError);
    CHECK_THROWS_AS(nld::StableLaw(2.0, 1), nld::ParameterError);
    CHECK_THROWS_AS(nld::StableLaw(1.0, 0), nld::ParameterError);
}
