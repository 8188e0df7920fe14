#include "etgossip/rng.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using etg::Purpose;
using etg::RandomStream;

TEST_CASE("same path gives the same stream") {
    auto a = RandomStream::derive(7, Purpose::gradient, {1, 2, 3});
    auto b = RandomStream::derive(7, Purpose::gradient, {1, 2, 3});
    for (int k = 0; k < 100; ++k) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("path components and purposes separate streams") {
    std::set<std::uint64_t> firsts;
    firsts.insert(RandomStream::derive(7, Purpose::gradient, {1, 2, 3}).next_u64());
    firsts.insert(RandomStream::derive(7, Purpose::gradient, {1, 3, 2}).next_u64());
    firsts.insert(RandomStream::derive(7, Purpose::link, {1, 2, 3}).next_u64());
    firsts.insert(RandomStream::derive(8, Purpose::gradient, {1, 2, 3}).next_u64());
    firsts.insert(etg::gradient_stream(7, 1, 2, 3).next_u64());
    // gradient_stream(7, 1, 2, 3) is by definition the first path above.
    CHECK(firsts.size() == 4);
}

TEST_CASE("uniform and normal moments") {
    auto s = RandomStream::derive(1, Purpose::init, {});
    constexpr int kDraws = 200000;
    double u_sum = 0.0, z_sum = 0.0, z_sq = 0.0;
    for (int k = 0; k < kDraws; ++k) {
        const double u = s.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        u_sum += u;
        const double z = s.normal();
        z_sum += z;
        z_sq += z * z;
    }
    // 5 sigma bands.
    CHECK(std::abs(u_sum / kDraws - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / kDraws));
    CHECK(std::abs(z_sum / kDraws) < 5.0 / std::sqrt(kDraws));
    CHECK(std::abs(z_sq / kDraws - 1.0) < 5.0 * std::sqrt(2.0 / kDraws));
}

TEST_CASE("below stays in range and hits every value") {
    auto s = RandomStream::derive(3, Purpose::topology, {});
    std::set<std::uint64_t> seen;
    for (int k = 0; k < 1000; ++k) {
        const auto v = s.below(7);
        REQUIRE(v < 7);
        seen.insert(v);
    }
    CHECK(seen.size() == 7);
}

TEST_CASE("bernoulli edge probabilities") {
    auto s = RandomStream::derive(3, Purpose::link, {});
    for (int k = 0; k < 100; ++k) {
        CHECK(s.bernoulli(1.0));
        CHECK_FALSE(s.bernoulli(0.0));
    }
}
