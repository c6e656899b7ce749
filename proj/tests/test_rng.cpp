#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmct/rng.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

using namespace qmct;

TEST_CASE("same seed reproduces the same stream bit for bit") {
    Rng a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) CHECK(a() == b());
    // and uniform draws too (they consume the same words)
    Rng c(777), d(777);
    for (int i = 0; i < 100; ++i) CHECK(c.uniform() == d.uniform());
}

TEST_CASE("different seeds give different streams") {
    Rng a(1), b(2);
    int same = 0;
    for (int i = 0; i < 64; ++i)
        if (a() == b()) ++same;
    CHECK(same == 0);
}

TEST_CASE("derive_key is order sensitive and collision free on a grid") {
    // (run, slot) grids must map to distinct keys: each simulation stream
    // must be independent of thread scheduling.
    std::set<std::uint64_t> keys;
    for (std::uint64_t run = 0; run < 64; ++run)
        for (std::uint64_t slot = 0; slot < 16; ++slot)
            keys.insert(Rng::derive_key(42, {run, slot}));
    CHECK(keys.size() == 64u * 16u);

    CHECK(Rng::derive_key(7, {1, 2}) != Rng::derive_key(7, {2, 1}));
    CHECK(Rng::derive_key(7, {1}) != Rng::derive_key(8, {1}));
    // deterministic: same inputs, same key
    CHECK(Rng::derive_key(7, {3, 4}) == Rng::derive_key(7, {3, 4}));
}

TEST_CASE("derived child streams look mutually independent") {
    // Correlation between sibling streams should be at noise level.
    Rng a = Rng::derive(99, {0});
    Rng b = Rng::derive(99, {1});
    const int n = 20000;
    double sum_ab = 0, sum_a = 0, sum_b = 0;
    for (int i = 0; i < n; ++i) {
        double x = a.uniform(), y = b.uniform();
        sum_ab += x * y;
        sum_a += x;
        sum_b += y;
    }
    double cov = sum_ab / n - (sum_a / n) * (sum_b / n);
    // var(uniform)=1/12; stderr of cov ~ (1/12)/sqrt(n) ~ 6e-4
    CHECK(std::abs(cov) < 4e-3);
}

TEST_CASE("uniform stays in [0,1) and has the right mean and variance") {
    Rng rng(2024);
    const int n = 100000;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        s += u;
        s2 += u * u;
    }
    double mean = s / n;
    double var = s2 / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 5e-3);            // sigma ~ 9e-4
    CHECK(std::abs(var - 1.0 / 12.0) < 5e-3);
}

TEST_CASE("uniform(lo,hi) respects its bounds") {
    Rng rng(5);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.uniform(-2.5, 7.5);
        REQUIRE(u >= -2.5);
        REQUIRE(u < 7.5);
    }
}

TEST_CASE("below(n) is in range and roughly uniform") {
    Rng rng(31337);
    const std::uint64_t n = 7;
    std::vector<int> counts(n, 0);
    const int draws = 70000;
    for (int i = 0; i < draws; ++i) {
        std::uint64_t k = rng.below(n);
        REQUIRE(k < n);
        ++counts[k];
    }
    // expected 10000 per bin, sigma ~ sqrt(10000*(6/7)) ~ 93
    for (std::uint64_t k = 0; k < n; ++k)
        CHECK(std::abs(counts[k] - draws / static_cast<double>(n)) < 500);
}

TEST_CASE("gaussian has unit variance, zero mean, and sane fourth moment") {
    Rng rng(8675309);
    const int n = 200000;
    double s = 0, s2 = 0, s4 = 0;
    for (int i = 0; i < n; ++i) {
        double g = rng.gaussian();
        s += g;
        s2 += g * g;
        s4 += g * g * g * g;
    }
    double mean = s / n;
    double var = s2 / n;
    double kurt = s4 / n;
    CHECK(std::abs(mean) < 0.01);        // sigma = 1/sqrt(n) ~ 2e-3
    CHECK(std::abs(var - 1.0) < 0.02);   // sigma ~ sqrt(2/n) ~ 3e-3
    CHECK(std::abs(kurt - 3.0) < 0.15);  // E g^4 = 3
}

TEST_CASE("exponential has mean 1/rate and matches the memoryless tail") {
    Rng rng(424242);
    const double rate = 2.5;
    const int n = 100000;
    double s = 0;
    int beyond = 0; // P(X > 1/rate) = 1/e
    for (int i = 0; i < n; ++i) {
        double x = rng.exponential(rate);
        REQUIRE(x >= 0.0);
        s += x;
        if (x > 1.0 / rate) ++beyond;
    }
    CHECK(std::abs(s / n - 1.0 / rate) < 0.01);
    CHECK(std::abs(beyond / static_cast<double>(n) - std::exp(-1.0)) < 0.01);
}

TEST_CASE("reseed restarts the stream") {
    Rng rng(9);
    std::vector<std::uint64_t> first;
    for (int i = 0; i < 16; ++i) first.push_back(rng());
    rng.reseed(9);
    for (int i = 0; i < 16; ++i) CHECK(rng() == first[i]);
}
