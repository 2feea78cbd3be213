#include <doctest.h>

#include <cmath>
#include <vector>

#include "nld/analytic.hpp"
#include "nld/estimators.hpp"

using namespace nld;

namespace {

ProblemSpec interval_problem(double alpha, Drift drift, double a = 0.0, double b = 1.0) {
    return ProblemSpec{Domain(Interval{a, b}), std::move(drift), StableLaw(alpha, 1)};
}

}  // namespace

TEST_CASE("merging accumulators is associative and order free") {
    std::vector<double> xs;
    for (int i = 0; i < 300; ++i) xs.push_back(std::sin(i * 1.7) * std::pow(10.0, i % 7));
    MomentAccumulator all, a, b, c;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        all.add(xs[i]);
        (i < 100 ? a : i < 200 ? b : c).add(xs[i]);
    }
    MomentAccumulator left = a, right = b;
    left.merge(b);
    left.merge(c);
    right.merge(c);
    right.merge(a);
    CHECK(left.mean() == all.mean());
    CHECK(right.mean() == all.mean());
    CHECK(left.variance() == all.variance());
    CHECK(right.variance() == all.variance());

    const EstimatorResult parts[] = {EstimatorResult::from(a), EstimatorResult::from(b), EstimatorResult::from(c)};
    const EstimatorResult pooled = merge(parts);
    CHECK(pooled.n == 300);
    CHECK(pooled.mean == all.mean());
    CHECK(pooled.std_error == doctest::Approx(std::sqrt(all.variance() / 300)).epsilon(1e-15));
}

TEST_CASE("results do not depend on the thread count") {
    const ProblemSpec p = interval_problem(0.7, Drift::example13());
    const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
    const double x0[] = {0.3};
    const auto one = estimate_exit_moments(x0, p, cfg, 3000, 2, {5, 1, 0});
    const auto many = estimate_exit_moments(x0, p, cfg, 3000, 2, {5, 7, 0});
    for (int k = 0; k < 2; ++k) {
        CHECK(one.orders[k].mean == many.orders[k].mean);
        CHECK(one.orders[k].variance == many.orders[k].variance);
    }

    ProblemSpec q = p;
    q.phi = DataFunction::sin_affine(3.0, 1.5707963267948966);
    const double times[] = {0.25, 0.5};
    const auto u1 = estimate_u_times(times, x0, q, cfg, 2000, {8, 1, 0});
    const auto u4 = estimate_u_times(times, x0, q, cfg, 2000, {8, 4, 0});
    CHECK(u1[0].mean == u4[0].mean);
    CHECK(u1[1].mean == u4[1].mean);
    const double last[] = {0.5};
    CHECK(estimate_u(0.5, x0, q, cfg, 2000, {8, 3, 0}).mean == estimate_u_times(last, x0, q, cfg, 2000, {8, 1, 0})[0].mean);
}

TEST_CASE("split runs merge into the full run") {
    const ProblemSpec p = interval_problem(1.2, Drift::zero(1));
    const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
    const double x0[] = {0.5};
    const auto full = estimate_exit_moments(x0, p, cfg, 2000, 1, {3, 2, 0});
    const auto head = estimate_exit_moments(x0, p, cfg, 1200, 1, {3, 2, 0});
    const auto tail = estimate_exit_moments(x0, p, cfg, 800, 1, {3, 2, 1200});
    const EstimatorResult parts[] = {head.orders[0], tail.orders[0]};
    CHECK(merge(parts).mean == full.orders[0].mean);
}

TEST_CASE("mean exit time from a symmetric interval is close to the closed form") {
    const ProblemSpec p = interval_problem(1.0, Drift::zero(1), -1.0, 1.0);
    const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
    const double x0[] = {0.0};
    const auto m = estimate_exit_moments(x0, p, cfg, 20000, 1, {42, 4, 0});
    const double oracle = getoor_mean_exit_time(1, 1.0, 1.0, 0.0);
    CHECK(std::abs(m.orders[0].mean - oracle) <= 0.05 + 3 * m.orders[0].std_error);
    CHECK(m.censored == 0);
}

TEST_CASE("exit position table") {
    const ProblemSpec p = interval_problem(0.5, Drift::constant_one(1));
    const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law, 1e-4);
    const double x0[] = {0.5};
    const double eps[] = {1e-2, 1e-3, 1e-4};
    const auto t = estimate_exit_position(x0, p, cfg, 4000, eps, {1, 4, 0});
    REQUIRE(t.components.size() == 2);
    const std::size_t left = t.component_index("left"), right = t.component_index("right");
    for (std::size_t c : {left, right}) {
        CHECK(t.fraction(1, c) <= t.fraction(0, c));
        CHECK(t.fraction(2, c) <= t.fraction(1, c));
    }
    CHECK(t.fraction(2, right) > t.fraction(2, left));
    std::uint64_t hist = t.hist_underflow + t.hist_overflow;
    for (auto h : t.hist_counts) hist += h;
    CHECK(hist + t.censored == t.n_paths);
}

TEST_CASE("ratio profile rows") {
    const ProblemSpec p = interval_problem(1.5, Drift::constant_one(1));
    const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
    const double xs[] = {0.25, 0.5};
    const auto rows = ratio_profile(xs, p, cfg, 1000, {1, 2, 0});
    REQUIRE(rows.size() == 2);
    for (const auto& r : rows) {
        CHECK(r.denominator == doctest::Approx(exit_time_profile_denominator(1.5, r.x)));
        CHECK(r.ratio == doctest::Approx(r.e_tau / r.denominator));
    }
    CHECK(exit_time_profile_denominator(0.5, 0.8) == doctest::Approx(0.2));
    CHECK(exit_time_profile_denominator(0.5, 0.2) == doctest::Approx(0.5));
    CHECK(exit_time_profile_denominator(1.0, 0.25) == doctest::Approx(0.5));
}

TEST_CASE("trivial data gives a zero estimate") {
    const ProblemSpec p = interval_problem(0.8, Drift::example13());
    const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
    const double x0[] = {0.4};
    const auto r = estimate_u(0.3, x0, p, cfg, 500, {1, 1, 0});
    CHECK(r.mean == 0.0);
    CHECK(r.variance == 0.0);
    CHECK(r.ci95_lo == 0.0);
}

TEST_CASE("running cost one recovers the truncated exit time") {
    ProblemSpec p = interval_problem(1.2, Drift::example13());
    p.f = DataFunction::constant(1.0);
    const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
    const double x0[] = {0.3};
    const auto u = estimate_u(cfg.horizon, x0, p, cfg, 2000, {21, 2, 0});
    const auto m = estimate_exit_moments(x0, p, cfg, 2000, 1, {22, 2, 0});
    CHECK(std::abs(u.mean - m.orders[0].mean) <= 3 * std::hypot(u.std_error, m.orders[0].std_error));

    // E (t ^ tau) is non-decreasing in t path by path.
    const double times[] = {0.05, 0.1, 0.2, 0.4};
    const auto ut = estimate_u_times(times, x0, p, cfg, 1000, {23, 2, 0});
    for (std::size_t k = 1; k < ut.size(); ++k) CHECK(ut[k].mean >= ut[k - 1].mean);
    CHECK(ut[0].mean <= 0.05 + 1e-12);
    CHECK(ut[1].ci95_hi - ut[1].mean == doctest::Approx(1.96 * ut[1].std_error));
}

TEST_CASE("mirror points of a symmetric driftless problem") {
    const ProblemSpec p = interval_problem(0.9, Drift::zero(1), -1.0, 1.0);
    const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law);
    const double left[] = {-0.6}, right[] = {0.6};
    const auto a = estimate_exit_moments(left, p, cfg, 3000, 1, {31, 2, 0});
    const auto b = estimate_exit_moments(right, p, cfg, 3000, 1, {32, 2, 0});
    CHECK(std::abs(a.orders[0].mean - b.orders[0].mean) <=
          3 * std::hypot(a.orders[0].std_error, b.orders[0].std_error));
}

TEST_CASE("inward drift keeps exits away from the boundary") {
    const ProblemSpec p = interval_problem(0.5, Drift::mirror13());
    const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law, 1e-3);
    const double x0[] = {0.5};
    const double eps[] = {1e-2, 1e-3};
    const auto t = estimate_exit_position(x0, p, cfg, 3000, eps, {41, 2, 0});
    for (std::size_t c = 0; c < 2; ++c) {
        CHECK(t.fraction(1, c) <= t.fraction(0, c));
        CHECK(t.fraction(1, c) < 0.01);
    }
}

TEST_CASE("driftless exits do not touch the boundary in the limit") {
    const ProblemSpec p = interval_problem(0.5, Drift::zero(1));
    const PathConfig cfg = PathConfig::defaults_for(p.domain, p.law, 1e-4);
    const double x0[] = {0.3};
    const double eps[] = {1e-1, 1e-2, 1e-3, 1e-4};
    const auto t = estimate_exit_position(x0, p, cfg, 3000, eps, {51, 2, 0});
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t e = 1; e < 4; ++e) CHECK(t.fraction(e, c) <= t.fraction(e - 1, c));
        CHECK(t.fraction(3, c) < 0.01);
    }
}

TEST_CASE("merge edge cases") {
    MomentAccumulator acc;
    for (double x : {1.0, 2.0, 4.0}) acc.add(x);
    const EstimatorResult one = EstimatorResult::from(acc);
    const EstimatorResult single[] = {one};
    const EstimatorResult m = merge(single);
    CHECK(m.mean == one.mean);
    CHECK(m.variance == one.variance);
    CHECK(m.ci95_lo == doctest::Approx(one.mean - 1.96 * one.std_error));
    const EstimatorResult twice[] = {one, one};
    CHECK(merge(twice).n == 6);
    CHECK_THROWS(merge(std::span<const EstimatorResult>()));
}

TEST_CASE("denominator is positive on the grid") {
    for (double alpha : {0.5, 1.0, 1.5})
        for (int k = 1; k <= 19; ++k) CHECK(exit_time_profile_denominator(alpha, 0.05 * k) > 0.0);
}
