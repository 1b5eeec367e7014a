#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hurstlab/backtest.hpp"
#include "hurstlab/hurst.hpp"
#include "hurstlab/parallel.hpp"
#include "hurstlab/stats.hpp"

namespace hurstlab {

/// One symbol through the full pipeline: H estimated on the first half,
/// both strategies run on the second half.
struct SymbolRow {
    std::string symbol;
    double h = 0.5;
    double r_momentum = 0.0;
    double r_meanrev = 0.0;
    std::size_t trades_momentum = 0;
    std::size_t trades_meanrev = 0;
};

struct SkippedSymbol {
    std::string symbol;
    std::string reason;
};

struct UniverseResult {
    std::vector<SymbolRow> rows;
    std::vector<SkippedSymbol> skipped;
};

struct UniverseConfig {
    Date split_date{2021, 7, 1};
    std::size_t short_window = 5;
    std::size_t long_window = 10;
    std::size_t band_window = 20;
    double band_k = 2.0;
    unsigned threads = 0;
};

/// Route to the mean-reversion return when h <= boundary, momentum otherwise
/// (the tie-break matches classify()).
inline double gated_return(const SymbolRow& row, double boundary) {
    return row.h <= boundary ? row.r_meanrev : row.r_momentum;
}

/// Classify each series on its first half and trade both strategies on its
/// second half. Symbols that fail a precondition (too short, degenerate) are
/// skipped with a reason rather than aborting the run. Parallel across
/// symbols; output order matches input order.
inline UniverseResult run_universe(std::span<const PriceSeries> universe,
                                   const UniverseConfig& config) {
    struct Slot {
        bool ok = false;
        SymbolRow row;
        std::string reason;
    };
    std::vector<Slot> slots(universe.size());

    parallel_for_index(
        universe.size(),
        [&](std::size_t i) {
            const PriceSeries& series = universe[i];
            Slot& slot = slots[i];
            try {
                auto [first_half, second_half] = split_at(series, config.split_date);
                const HurstEstimate est = estimate_hurst(first_half);
                const BacktestResult momentum = run_backtest(
                    second_half,
                    momentum_signals(second_half, config.short_window, config.long_window));
                const BacktestResult meanrev = run_backtest(
                    second_half, meanrev_signals(second_half, config.band_window, config.band_k));
                slot.row = SymbolRow{series.symbol,        est.h,
                                     momentum.final_return, meanrev.final_return,
                                     momentum.trades.size(), meanrev.trades.size()};
                slot.ok = true;
            } catch (const std::exception& e) {
                slot.reason = e.what();
            }
        },
        config.threads);

    UniverseResult result;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].ok)
            result.rows.push_back(std::move(slots[i].row));
        else
            result.skipped.push_back({universe[i].symbol, std::move(slots[i].reason)});
    }
    if (result.rows.empty())
        throw std::runtime_error("run_universe: no usable symbols");
    return result;
}

/// Gated-return summary at one boundary.
struct SweepPoint {
    double boundary = 0.0;
    SummaryStats stats;
};

/// Uniform grid 0, step, 2*step, ..., 1 (inclusive).
inline std::vector<double> default_grid(double step = 0.01) {
    if (!(step > 0.0 && step <= 1.0))
        throw std::invalid_argument("default_grid: step must be in (0,1]");
    std::vector<double> grid;
    const std::size_t points = static_cast<std::size_t>(1.0 / step + 0.5);
    grid.reserve(points + 1);
    for (std::size_t i = 0; i <= points; ++i)
        grid.push_back(static_cast<double>(i) * step);
    grid.back() = 1.0;
    return grid;
}

/// Summary of gated returns at every grid boundary. Rows are always consumed
/// in input order, so the x = 0 / x = 1 endpoints reproduce the all-momentum
/// and all-mean-reversion summaries bit for bit.
inline std::vector<SweepPoint> sweep(std::span<const SymbolRow> rows,
                                     std::span<const double> grid, unsigned threads = 0) {
    if (rows.empty())
        throw std::invalid_argument("sweep: no rows");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 0.0 || grid[i] > 1.0)
            throw std::invalid_argument("sweep: grid values must lie in [0,1]");
        if (i > 0 && !(grid[i - 1] < grid[i]))
            throw std::invalid_argument("sweep: grid must be increasing");
    }

    std::vector<SweepPoint> points(grid.size());
    parallel_for_index(
        grid.size(),
        [&](std::size_t g) {
            std::vector<double> gated;
            gated.reserve(rows.size());
            for (const SymbolRow& row : rows) gated.push_back(gated_return(row, grid[g]));
            points[g] = SweepPoint{grid[g], summary(gated)};
        },
        threads);
    return points;
}

}  // namespace hurstlab
