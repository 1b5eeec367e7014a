#include "hurstlab/stats.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "hurstlab/rng.hpp"

using namespace hurstlab;
using Catch::Approx;

TEST_CASE("summary statistics", "[stats]") {
    SECTION("odd n") {
        const auto s = summary(std::vector<double>{1, 2, 3});
        REQUIRE(s.mean == 2.0);
        REQUIRE(s.median == 2.0);
        REQUIRE(s.std == 1.0);
        REQUIRE(s.n == 3);
        REQUIRE_FALSE(s.degenerate_std);
    }
    SECTION("even n takes the middle-pair mean") {
        REQUIRE(summary(std::vector<double>{1, 2, 3, 4}).median == 2.5);
        REQUIRE(summary(std::vector<double>{4, 1, 3, 2}).median == 2.5);
    }
    SECTION("single value is degenerate") {
        const auto s = summary(std::vector<double>{5});
        REQUIRE(s.mean == 5.0);
        REQUIRE(s.median == 5.0);
        REQUIRE(s.std == 0.0);
        REQUIRE(s.degenerate_std);
    }
    SECTION("empty input") {
        REQUIRE_THROWS(summary(std::vector<double>{}));
    }
}

TEST_CASE("summary translation and scaling", "[stats]") {
    SplitMix64 rng(404);
    std::vector<double> x(257);
    for (auto& v : x) v = rng.next_double() * 4.0 - 2.0;

    const auto base = summary(x);
    const double c = 1.375, a = -2.25;

    std::vector<double> shifted = x, scaled = x;
    for (auto& v : shifted) v += c;
    for (auto& v : scaled) v *= a;

    const auto s = summary(shifted);
    REQUIRE(s.mean == Approx(base.mean + c).margin(1e-12));
    REQUIRE(s.median == Approx(base.median + c).margin(1e-12));
    REQUIRE(s.std == Approx(base.std).margin(1e-12));

    REQUIRE(summary(scaled).std == Approx(std::abs(a) * base.std).margin(1e-12));
}

TEST_CASE("histogram", "[stats]") {
    SECTION("explicit range") {
        const auto h = histogram(std::vector<double>{0, 1, 2, 3}, 2, std::pair{0.0, 4.0});
        REQUIRE(h.counts == std::vector<std::size_t>{2, 2});
        REQUIRE(h.bin_edges == std::vector<double>{0.0, 2.0, 4.0});
    }
    SECTION("single value, single bin") {
        const auto h = histogram(std::vector<double>{1.5}, 1);
        REQUIRE(h.counts == std::vector<std::size_t>{1});
    }
    SECTION("value at the max edge lands in the last bin") {
        const auto h = histogram(std::vector<double>{0, 1, 2}, 2, std::pair{0.0, 2.0});
        REQUIRE(h.counts == std::vector<std::size_t>{1, 2});
    }
    SECTION("out-of-range values are dropped") {
        const auto h = histogram(std::vector<double>{-1, 0, 1, 5}, 2, std::pair{0.0, 2.0});
        REQUIRE(h.counts == std::vector<std::size_t>{1, 1});
    }
    SECTION("errors") {
        REQUIRE_THROWS(histogram(std::vector<double>{}, 2));
        REQUIRE_THROWS(histogram(std::vector<double>{1}, 0));
        REQUIRE_THROWS(histogram(std::vector<double>{1, 1}, 2));  // zero-width, several bins
        REQUIRE_THROWS(histogram(std::vector<double>{1, 2}, 2, std::pair{3.0, 1.0}));
    }
    SECTION("counts are conserved and permutation-invariant") {
        SplitMix64 rng(7);
        std::vector<double> v(1000);
        for (auto& x : v) x = rng.next_double() * 10.0;

        const auto h = histogram(v, 13);
        REQUIRE(std::accumulate(h.counts.begin(), h.counts.end(), std::size_t{0}) == v.size());

        std::vector<double> shuffled = v;
        std::shuffle(shuffled.begin(), shuffled.end(), std::mt19937{99});
        REQUIRE(histogram(shuffled, 13).counts == h.counts);
    }
}

TEST_CASE("sharpe ratio", "[stats]") {
    SECTION("six-month cross-sectional inputs are negative at a 2% risk-free rate") {
        const double momentum = sharpe(0.0005, 0.0290, 0.02);
        const double meanrev = sharpe(0.0192, 0.0648, 0.02);
        REQUIRE(momentum < 0.0);
        REQUIRE(meanrev < 0.0);
        REQUIRE(momentum == Approx(-0.672).margin(1e-3));
        REQUIRE(meanrev == Approx(-0.012).margin(1e-3));
    }
    SECTION("mean equal to the risk-free rate") {
        REQUIRE(sharpe(0.02, 0.1, 0.02) == 0.0);
    }
    SECTION("zero or negative dispersion is rejected") {
        REQUIRE_THROWS(sharpe(0.1, 0.0));
        REQUIRE_THROWS(sharpe(0.1, -0.5));
    }
    SECTION("monotone in mean and dispersion") {
        REQUIRE(sharpe(0.05, 0.1) < sharpe(0.06, 0.1));
        REQUIRE(sharpe(0.05, 0.2) < sharpe(0.05, 0.1));  // mean above risk-free
    }
}
