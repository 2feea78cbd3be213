#include <doctest.h>

#include <cmath>
#include <set>

#include "nld/rng.hpp"

using nld::philox4x32;

TEST_CASE("philox known-answer vectors") {
    using A4 = std::array<std::uint32_t, 4>;
    CHECK(philox4x32({0, 0, 0, 0}, {0, 0}) == A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
          A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
          A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are pure functions of seed, stream and position") {
    nld::RngStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next_u64();
        CHECK(x == b.next_u64());
        CHECK(x != c.next_u64());
        CHECK(x != d.next_u64());
    }
    CHECK(a.words_drawn() == 100);
}

TEST_CASE("uniform stays in the open unit interval with the right moments") {
    nld::RngStream s(1, 0);
    double sum = 0, sq = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform();
        REQUIRE(u > 0.0);
        REQUIRE(u < 1.0);
        sum += u;
        sq += u * u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
    CHECK(sq / n == doctest::Approx(1.0 / 3).epsilon(0.005));
}

TEST_CASE("normal and exponential moments") {
    nld::RngStream s(2, 0);
    double m1 = 0, m2 = 0, e1 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        m1 += z;
        m2 += z * z;
        e1 += s.exponential();
    }
    CHECK(std::abs(m1 / n) < 0.01);
    CHECK(m2 / n == doctest::Approx(1.0).epsilon(0.01));
    CHECK(e1 / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("mix_seed separates tags") {
    std::set<std::uint64_t> seen;
    for (std::uint64_t t = 0; t < 1000; ++t) seen.insert(nld::mix_seed(42, t));
    CHECK(seen.size() == 1000);
    CHECK(nld::mix_seed(42, 5) == nld::mix_seed(42, 5));
}
