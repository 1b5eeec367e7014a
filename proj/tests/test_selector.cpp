#include "hurstlab/selector.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "helpers.hpp"

using namespace hurstlab;
using Catch::Approx;

namespace {

std::vector<SymbolRow> random_rows(std::size_t n, std::uint64_t seed) {
    SplitMix64 rng(seed);
    std::vector<SymbolRow> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        SymbolRow row;
        row.symbol = "S" + std::to_string(i);
        row.h = 0.01 + 0.98 * rng.next_double();
        row.r_momentum = rng.next_double() * 0.4 - 0.2;
        row.r_meanrev = rng.next_double() * 0.4 - 0.2;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

TEST_CASE("gated_return routing", "[selector]") {
    SymbolRow row{"X", 0.3, 0.02, 0.05};
    REQUIRE(gated_return(row, 0.5) == 0.05);       // mean reverting side
    row.h = 0.7;
    REQUIRE(gated_return(row, 0.5) == 0.02);       // trending side
    row.h = 0.3;
    REQUIRE(gated_return(row, 0.0) == 0.02);       // boundary 0 trades everything momentum
    row.h = 0.5;
    REQUIRE(gated_return(row, 0.5) == 0.05);       // tie routes to mean reversion
}

TEST_CASE("run_universe composes the per-symbol pipeline", "[selector]") {
    const Date split = kSyntheticStart.plus_days(150);
    UniverseConfig config{split, 5, 10, 20, 2.0, 1};

    SECTION("single symbol matches the hand-composed result") {
        std::vector<PriceSeries> universe{synth_persistent(300, 8, 0.5, 0.02)};
        universe[0].symbol = "ONE";
        const auto result = run_universe(universe, config);
        REQUIRE(result.rows.size() == 1);
        REQUIRE(result.skipped.empty());

        const auto [h1, h2] = split_at(universe[0], split);
        const SymbolRow& row = result.rows[0];
        REQUIRE(row.symbol == "ONE");
        REQUIRE(row.h == estimate_hurst(h1).h);
        REQUIRE(row.r_momentum == run_backtest(h2, momentum_signals(h2, 5, 10)).final_return);
        REQUIRE(row.r_meanrev == run_backtest(h2, meanrev_signals(h2, 20, 2.0)).final_return);
    }
    SECTION("short symbols are skipped with a reason, not fatal") {
        std::vector<PriceSeries> universe{synth_persistent(300, 8, 0.5, 0.02),
                                          synth_random_walk(10, 9, 0.01)};
        universe[0].symbol = "GOOD";
        universe[1].symbol = "SHORT";
        const auto result = run_universe(universe, config);
        REQUIRE(result.rows.size() == 1);
        REQUIRE(result.rows[0].symbol == "GOOD");
        REQUIRE(result.skipped.size() == 1);
        REQUIRE(result.skipped[0].symbol == "SHORT");
        REQUIRE_FALSE(result.skipped[0].reason.empty());
    }
    SECTION("an empty universe after filtering is an error") {
        std::vector<PriceSeries> universe{synth_random_walk(10, 9, 0.01)};
        REQUIRE_THROWS(run_universe(universe, config));
    }
}

TEST_CASE("run_universe separates synthetic regimes", "[selector]") {
    // 100 persistent + 100 OU symbols; classification on the first half
    const double log_p0 = std::log(100.0);
    std::vector<PriceSeries> universe;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto ar = synth_persistent(2048, derive_seed(501, i), 0.6, 0.01);
        ar.symbol = "AR" + std::to_string(i);
        universe.push_back(std::move(ar));
        auto ou = synth_ou(2048, derive_seed(502, i), 0.3, log_p0, 0.02, log_p0);
        ou.symbol = "OU" + std::to_string(i);
        universe.push_back(std::move(ou));
    }
    UniverseConfig config{kSyntheticStart.plus_days(1024), 5, 10, 20, 2.0, 0};
    const auto result = run_universe(universe, config);
    REQUIRE(result.rows.size() == 200);

    int ou_low = 0, ar_high = 0;
    for (const SymbolRow& row : result.rows) {
        if (row.symbol.rfind("OU", 0) == 0) ou_low += row.h < 0.5;
        else ar_high += row.h > 0.5;
    }
    REQUIRE(ou_low >= 90);
    REQUIRE(ar_high >= 90);
}

TEST_CASE("sweep endpoints and shape", "[selector]") {
    const auto rows = random_rows(97, 1001);
    const auto grid = default_grid(0.01);
    REQUIRE(grid.size() == 101);
    REQUIRE(grid.front() == 0.0);
    REQUIRE(grid.back() == 1.0);

    const auto points = sweep(rows, grid, 1);
    REQUIRE(points.size() == grid.size());

    SECTION("x = 0 reproduces the all-momentum summary bitwise") {
        std::vector<double> mom;
        for (const auto& r : rows) mom.push_back(r.r_momentum);
        const SummaryStats expect = summary(mom);
        REQUIRE(points.front().stats.mean == expect.mean);
        REQUIRE(points.front().stats.median == expect.median);
        REQUIRE(points.front().stats.std == expect.std);
    }
    SECTION("x = 1 reproduces the all-mean-reversion summary bitwise") {
        std::vector<double> mr;
        for (const auto& r : rows) mr.push_back(r.r_meanrev);
        const SummaryStats expect = summary(mr);
        REQUIRE(points.back().stats.mean == expect.mean);
        REQUIRE(points.back().stats.median == expect.median);
        REQUIRE(points.back().stats.std == expect.std);
    }
    SECTION("every point covers every row") {
        for (const auto& p : points) REQUIRE(p.stats.n == rows.size());
    }
    SECTION("parallel and single-threaded sweeps agree bitwise") {
        const auto parallel = sweep(rows, grid, 4);
        for (std::size_t i = 0; i < points.size(); ++i) {
            REQUIRE(parallel[i].stats.mean == points[i].stats.mean);
            REQUIRE(parallel[i].stats.std == points[i].stats.std);
        }
    }
}

TEST_CASE("gated return is a single-step function of the boundary", "[selector]") {
    SymbolRow row{"X", 0.4, -0.07, 0.11};
    const auto grid = default_grid(0.01);
    int switches = 0;
    double prev = gated_return(row, grid[0]);
    REQUIRE(prev == row.r_momentum);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double cur = gated_return(row, grid[i]);
        if (cur != prev) ++switches;
        if (grid[i] < row.h) REQUIRE(cur == row.r_momentum);
        if (grid[i] >= row.h) REQUIRE(cur == row.r_meanrev);
        prev = cur;
    }
    REQUIRE(switches == 1);
}

TEST_CASE("sweep stats are permutation invariant", "[selector]") {
    auto rows = random_rows(50, 77);
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};
    const auto before = sweep(rows, grid, 1);
    std::shuffle(rows.begin(), rows.end(), std::mt19937{11});
    const auto after = sweep(rows, grid, 1);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        REQUIRE(after[i].stats.mean == Approx(before[i].stats.mean).margin(1e-12));
        REQUIRE(after[i].stats.std == Approx(before[i].stats.std).margin(1e-12));
        REQUIRE(after[i].stats.median == before[i].stats.median);  // sorting makes it exact
        REQUIRE(after[i].stats.n == before[i].stats.n);
    }
}

TEST_CASE("sweep input validation", "[selector]") {
    const auto rows = random_rows(5, 3);
    const std::vector<SymbolRow> empty;
    REQUIRE_THROWS(sweep(empty, default_grid()));
    REQUIRE_THROWS(sweep(rows, std::vector<double>{0.5, 0.4}));
    REQUIRE_THROWS(sweep(rows, std::vector<double>{-0.1, 0.5}));
    REQUIRE_THROWS(sweep(rows, std::vector<double>{0.5, 1.2}));
    REQUIRE_THROWS(default_grid(0.0));
}
