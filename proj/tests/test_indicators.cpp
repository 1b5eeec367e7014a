#include "hurstlab/indicators.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <vector>

#include "hurstlab/rng.hpp"

using namespace hurstlab;
using Catch::Approx;

namespace {

std::vector<double> uniform_values(std::size_t n, std::uint64_t seed, double lo = 0.0,
                                   double hi = 1.0) {
    SplitMix64 rng(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = lo + (hi - lo) * rng.next_double();
    return v;
}

}  // namespace

TEST_CASE("sma basics", "[indicators]") {
    SECTION("constant input") {
        const auto s = sma(std::vector<double>{2, 2, 2, 2, 2}, 3);
        REQUIRE(s.valid_from == 2);
        REQUIRE(std::isnan(s.values[0]));
        REQUIRE(std::isnan(s.values[1]));
        for (std::size_t i = 2; i < 5; ++i) REQUIRE(s.values[i] == 2.0);
    }
    SECTION("arithmetic") {
        const auto s = sma(std::vector<double>{1, 2, 3, 4}, 2);
        REQUIRE(s.values[1] == 1.5);
        REQUIRE(s.values[2] == 2.5);
        REQUIRE(s.values[3] == 3.5);
    }
    SECTION("window equal to length") {
        const auto s = sma(std::vector<double>{1, 2, 3, 4}, 4);
        REQUIRE(s.valid_from == 3);
        REQUIRE(s.values[3] == 2.5);
    }
    SECTION("window out of range") {
        REQUIRE_THROWS(sma(std::vector<double>{1, 2}, 0));
        REQUIRE_THROWS(sma(std::vector<double>{1, 2}, 3));
    }
}

TEST_CASE("rolling_std basics", "[indicators]") {
    SECTION("constant window is exactly zero") {
        const auto s = rolling_std(std::vector<double>{0.1, 0.1, 0.1, 0.1}, 3);
        REQUIRE(s.values[2] == 0.0);
        REQUIRE(s.values[3] == 0.0);
    }
    SECTION("population formula") {
        const auto s = rolling_std(std::vector<double>{1, 2, 3}, 3);
        REQUIRE(s.values[2] == Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    }
    SECTION("1..20 window 20") {
        // population variance of n consecutive integers is (n^2 - 1) / 12
        std::vector<double> v(20);
        for (int i = 0; i < 20; ++i) v[i] = i + 1;
        const auto s = rolling_std(v, 20);
        REQUIRE(s.values[19] == Approx(std::sqrt(33.25)).epsilon(1e-15));
        REQUIRE(s.values[19] == Approx(5.76628).margin(1e-5));
    }
    SECTION("window below 2") {
        REQUIRE_THROWS(rolling_std(std::vector<double>{1, 2, 3}, 1));
    }
}

TEST_CASE("bollinger bands", "[indicators]") {
    SECTION("constant series collapses the bands") {
        const std::vector<double> v(25, 7.25);
        const auto b = bollinger(v, 20, 2.0);
        for (std::size_t i = b.middle.valid_from; i < v.size(); ++i) {
            REQUIRE(b.lower.values[i] == 7.25);
            REQUIRE(b.middle.values[i] == 7.25);
            REQUIRE(b.upper.values[i] == 7.25);
        }
    }
    SECTION("1..20 window 20 k 2") {
        std::vector<double> v(20);
        for (int i = 0; i < 20; ++i) v[i] = i + 1;
        const auto b = bollinger(v, 20, 2.0);
        REQUIRE(b.middle.values[19] == 10.5);
        REQUIRE(b.upper.values[19] == Approx(22.03257).margin(1e-5));
        REQUIRE(b.lower.values[19] == Approx(-1.03257).margin(1e-5));
    }
    SECTION("k = 0 degenerates to the sma") {
        const auto v = uniform_values(50, 8);
        const auto b = bollinger(v, 10, 0.0);
        const auto m = sma(v, 10);
        for (std::size_t i = 9; i < v.size(); ++i) {
            REQUIRE(b.lower.values[i] == m.values[i]);
            REQUIRE(b.upper.values[i] == m.values[i]);
        }
    }
    SECTION("ordering invariant") {
        const auto v = uniform_values(200, 9, 50.0, 150.0);
        const auto b = bollinger(v, 20, 2.0);
        for (std::size_t i = 19; i < v.size(); ++i) {
            REQUIRE(b.lower.values[i] <= b.middle.values[i]);
            REQUIRE(b.middle.values[i] <= b.upper.values[i]);
        }
    }
    SECTION("negative k rejected") {
        REQUIRE_THROWS(bollinger(std::vector<double>(30, 1.0), 20, -1.0));
    }
}

TEST_CASE("indicator affine responses", "[indicators]") {
    const auto x = uniform_values(300, 123, -5.0, 5.0);
    const double a = -2.5, b = 3.75;
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b;

    const auto sx = sma(x, 12), sy = sma(y, 12);
    const auto dx = rolling_std(x, 12), dy = rolling_std(y, 12);
    for (std::size_t i = 11; i < x.size(); ++i) {
        REQUIRE(sy.values[i] == Approx(a * sx.values[i] + b).margin(1e-12));
        REQUIRE(dy.values[i] == Approx(std::abs(a) * dx.values[i]).margin(1e-12));
    }
}

TEST_CASE("sma stays within the window extremes", "[indicators]") {
    const auto v = uniform_values(500, 31, 10.0, 20.0);
    const std::size_t w = 7;
    const auto s = sma(v, w);
    for (std::size_t i = w - 1; i < v.size(); ++i) {
        double lo = v[i], hi = v[i];
        for (std::size_t j = i + 1 - w; j <= i; ++j) {
            lo = std::min(lo, v[j]);
            hi = std::max(hi, v[j]);
        }
        REQUIRE(s.values[i] >= lo);
        REQUIRE(s.values[i] <= hi);
    }
}

TEST_CASE("shift equivariance: prepending changes alignment only", "[indicators]") {
    const auto tail = uniform_values(120, 77);
    auto full = uniform_values(9, 78);
    full.insert(full.end(), tail.begin(), tail.end());

    const std::size_t w = 15;
    const auto s_tail = sma(tail, w);
    const auto s_full = sma(full, w);
    const auto d_tail = rolling_std(tail, w);
    const auto d_full = rolling_std(full, w);
    for (std::size_t i = w - 1; i < tail.size(); ++i) {
        REQUIRE(s_full.values[i + 9] == s_tail.values[i]);  // bitwise
        REQUIRE(d_full.values[i + 9] == d_tail.values[i]);
    }
}

TEST_CASE("streaming and batch agree on large random input", "[indicators]") {
    const std::size_t n = 100000, w = 20;
    const auto v = uniform_values(n, 2024, 80.0, 120.0);
    const auto batch_mean = sma(v, w);
    const auto batch_std = rolling_std(v, w);

    RollingStats rolling(w);
    for (std::size_t i = 0; i < n; ++i) {
        rolling.push(v[i]);
        REQUIRE(rolling.ready() == (i >= w - 1));
        if (rolling.ready()) {
            REQUIRE(rolling.mean() == Approx(batch_mean.values[i]).margin(1e-9));
            REQUIRE(rolling.std_pop() == Approx(batch_std.values[i]).margin(1e-9));
        }
    }
}
