#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <vector>

#include "nld/analytic.hpp"
#include "nld/error.hpp"
#include "nld/fd_solver.hpp"

using namespace nld;

namespace {

ProblemSpec dyda_problem(double alpha) {
    return ProblemSpec{Domain(Interval{-1.0, 1.0}), Drift::zero(1), StableLaw(alpha, 1), DataFunction::zero(),
                       DataFunction::constant(dyda_constant(1, alpha))};
}

double max_norm_error(double alpha, int N) {
    const Grid1D g = Grid1D::make(-1.0, 1.0, N);
    const auto u = solve_steady(dyda_problem(alpha), g);
    double err = 0;
    for (int i = 0; i < N; ++i) err = std::max(err, std::abs(u[i] - std::pow(1 - g.node(i) * g.node(i), alpha / 2)));
    return err;
}

}  // namespace

TEST_CASE("grid layout") {
    const Grid1D g = Grid1D::make(0.0, 1.0, 9, 2);
    CHECK(g.h() == doctest::Approx(0.1));
    CHECK(g.node(0) == doctest::Approx(0.1));
    CHECK(g.nodes().size() == 9);
    CHECK(g.padded_nodes().size() == 13);
    CHECK(g.padded_nodes().front() == doctest::Approx(-0.1));
    CHECK_THROWS_AS(Grid1D::make(1.0, 0.0, 5), ParameterError);
}

TEST_CASE("stencil weights") {
    for (double alpha : {0.5, 1.0, 1.5}) {
        const Grid1D g = Grid1D::make(0.0, 1.0, 200);
        const auto w = assemble_frac_laplacian(g, alpha);
        CHECK(w.w[0] == 0.0);
        for (std::size_t k = 1; k + 1 < w.w.size(); ++k) {
            REQUIRE(w.w[k] > 0.0);
            REQUIRE(w.w[k + 1] < w.w[k]);
        }
        // Far weights follow the kernel C h^{-alpha} k^{-1-alpha}.
        const double c = fractional_laplacian_constant(1, alpha) * std::pow(g.h(), -alpha);
        CHECK(w.w[150] == doctest::Approx(c * std::pow(150.0, -1 - alpha)).epsilon(1e-3));
        CHECK(w.tail(1) == doctest::Approx(w.one_side_total).epsilon(1e-14));
        CHECK(w.diagonal() == doctest::Approx(-2 * w.one_side_total));

        // With zero exterior the constant vector only feels the mass beyond the ends.
        const std::vector<double> ones(g.N, 1.0);
        const auto l1 = w.apply(ones);
        for (int i : {0, 17, 100, 199})
            CHECK(l1[i] == doctest::Approx(-(w.tail(i + 1) + w.tail(g.N - i))).epsilon(1e-10));
        // Symmetric operator.
        std::vector<double> e3(g.N, 0.0), e50(g.N, 0.0);
        e3[3] = 1.0;
        e50[50] = 1.0;
        CHECK(w.apply(e3)[50] == doctest::Approx(w.apply(e50)[3]).epsilon(1e-15));
    }
}

TEST_CASE("stencil reproduces the Dyda identity away from the boundary") {
    for (double alpha : {0.5, 1.5}) {
        const double K = dyda_constant(1, alpha);
        double prev = 1e300;
        for (int N : {199, 799}) {
            const Grid1D g = Grid1D::make(-1.0, 1.0, N);
            std::vector<double> u(N);
            for (int i = 0; i < N; ++i) u[i] = std::pow(1 - g.node(i) * g.node(i), alpha / 2);
            const auto lu = assemble_frac_laplacian(g, alpha).apply(u);
            double err = 0;
            for (int i = 0; i < N; ++i)
                if (std::abs(g.node(i)) <= 0.5) err = std::max(err, std::abs(lu[i] + K) / K);
            CHECK(err < prev);
            prev = err;
        }
        CHECK(prev < 0.02);
    }
}

TEST_CASE("steady state converges to the Dyda profile") {
    for (double alpha : {0.5, 1.5}) {
        const double coarse = max_norm_error(alpha, 250), fine = max_norm_error(alpha, 1000);
        CAPTURE(alpha);
        CHECK(fine < coarse);
        CHECK(fine < 0.04);
    }
}

TEST_CASE("time stepping tends to the steady state") {
    const ProblemSpec p = dyda_problem(1.2);
    const Grid1D g = Grid1D::make(-1.0, 1.0, 199);
    const auto steady = solve_steady(p, g);
    const GridSolution s = solve(p, g, 0.01, 20.0);
    for (int i = 0; i < g.N; i += 20) CHECK(s.values.back()[i] == doctest::Approx(steady[i]).epsilon(1e-6));
}

TEST_CASE("maximum principle and record times") {
    const ProblemSpec p{Domain(Interval{0.0, 1.0}), Drift::example13(), StableLaw(0.5, 1),
                        DataFunction::sin_affine(3.0, std::numbers::pi / 2)};
    const Grid1D g = Grid1D::make(0.0, 1.0, 300);
    const GridSolution s = solve(p, g, 1e-3, 0.5, {0.1, 0.25, 0.5});
    REQUIRE(s.times == std::vector<double>{0.0, 0.1, 0.25, 0.5});
    for (const auto& row : s.values)
        for (double v : row) {
            REQUIRE(v >= -1.0);
            REQUIRE(v <= 1.0);
        }
    CHECK(s.value_at(3, -0.1) == 0.0);
    CHECK(s.value_at(3, 0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(s.value_at(3, 0.25) == doctest::Approx(-s.value_at(3, 0.75)).epsilon(1e-10));

    const auto path = std::filesystem::temp_directory_path() / "nld_fd_grid_test.csv";
    s.write_csv(path.string());
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header.rfind("t,", 0) == 0);
    std::filesystem::remove(path);
}

TEST_CASE("explicit drift step respects the CFL bound") {
    const Grid1D g = Grid1D::make(0.0, 1.0, 99);
    const auto w = assemble_frac_laplacian(g, 0.8);
    const std::vector<double> u(g.N, 0.5), f(g.N, 0.0);
    const Drift b = Drift::minus_x();
    CHECK_THROWS_AS(step_imex(u, 0.02, b, f, g, w), CflViolation);
    try {
        step_imex(u, 0.02, b, f, g, w);
    } catch (const CflViolation& e) {
        CHECK(e.admissible_dt() == doctest::Approx(g.h()).epsilon(1e-9));
    }
    CHECK_NOTHROW(step_imex(u, 0.005, b, f, g, w));
}

TEST_CASE("local test mode integrates the source exactly") {
    const Grid1D g = Grid1D::make(0.0, 1.0, 49);
    const auto w = assemble_frac_laplacian(g, 1.0);
    std::vector<double> u(g.N);
    for (int i = 0; i < g.N; ++i) u[i] = std::sin(i * 0.3);
    const std::vector<double> f(g.N, 1.0);
    const auto next = step_imex(u, 0.01, Drift::zero(1), f, g, w, false);
    for (int i = 0; i < g.N; ++i) CHECK(next[i] == doctest::Approx(u[i] + 0.01).epsilon(1e-14));
}
