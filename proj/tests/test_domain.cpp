#include <doctest.h>

#include <cmath>

#include "nld/domain.hpp"
#include "nld/error.hpp"

using nld::BoundaryLabel;
using nld::Domain;
using nld::Drift;

TEST_CASE("signed distance on an interval") {
    const Domain d(nld::Interval{0.0, 1.0});
    CHECK(d.signed_distance(0.25) == doctest::Approx(0.25));
    CHECK(d.signed_distance(0.9) == doctest::Approx(0.1));
    CHECK(d.signed_distance(-0.5) == doctest::Approx(-0.5));
    CHECK(d.signed_distance(1.0) == 0.0);
    CHECK(d.diameter() == 1.0);
    CHECK(d.boundary_components() == std::vector<std::string>{"left", "right"});
    const double x[] = {0.2};
    CHECK(d.distance_to_component(x, 0) == doctest::Approx(0.2));
    CHECK(d.distance_to_component(x, 1) == doctest::Approx(0.8));
}

TEST_CASE("ball and half-space") {
    const Domain ball(nld::Ball{{1.0, 0.0}, 2.0});
    const double inside[] = {1.0, 1.0}, outside[] = {4.0, 0.0};
    CHECK(ball.signed_distance(inside) == doctest::Approx(1.0));
    CHECK(ball.signed_distance(outside) == doctest::Approx(-1.0));
    CHECK(ball.diameter() == 4.0);
    const double z[] = {3.0, 0.0};
    CHECK(ball.outward_normal(z)[0] == doctest::Approx(1.0));

    const Domain half(nld::HalfSpace{{0.0, 1.0}, 0.5});
    const double p[] = {7.0, 2.0};
    CHECK(half.signed_distance(p) == doctest::Approx(1.5));
    CHECK_FALSE(half.bounded());
    CHECK_THROWS_AS(half.diameter(), nld::ParameterError);
}

TEST_CASE("classification of the preset drifts on (0,1)") {
    const Domain d(nld::Interval{0.0, 1.0});
    const double left[] = {0.0}, right[] = {1.0};
    auto label = [&](const Drift& b, const double* z) {
        return nld::classify_boundary(d, b, std::span<const double>(z, 1)).label;
    };
    CHECK(label(Drift::example13(), left) == BoundaryLabel::GammaGreater);
    CHECK(label(Drift::example13(), right) == BoundaryLabel::GammaGreater);
    CHECK(label(Drift::mirror13(), left) == BoundaryLabel::GammaLess);
    CHECK(label(Drift::mirror13(), right) == BoundaryLabel::GammaLess);
    CHECK(label(Drift::minus_x(), left) == BoundaryLabel::GammaEq);
    CHECK(label(Drift::minus_x(), right) == BoundaryLabel::GammaLess);
    CHECK(label(Drift::constant_one(1), left) == BoundaryLabel::GammaLess);
    CHECK(label(Drift::constant_one(1), right) == BoundaryLabel::GammaGreater);
}

TEST_CASE("drift sup norm and presets") {
    const Domain d(nld::Interval{0.0, 1.0});
    CHECK(Drift::example13().sup_norm(d) == doctest::Approx(0.5));
    CHECK(Drift::minus_x().sup_norm(d) == doctest::Approx(1.0));
    CHECK(Drift::zero(1).is_zero());
    CHECK(Drift::preset("mirror13").eval1d(0.0) == doctest::Approx(0.5));
    CHECK_THROWS(Drift::preset("no-such-drift"));
}
