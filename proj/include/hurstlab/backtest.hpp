#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "hurstlab/indicators.hpp"
#include "hurstlab/marketdata.hpp"

namespace hurstlab {

/// Per-day long/flat trading markers. Nothing fires before valid_from.
enum class Signal { None, Enter, Exit };

struct SignalSeries {
    std::vector<Signal> markers;
    std::size_t valid_from = 0;
};

struct TradeRecord {
    std::size_t entry_index = 0;
    std::size_t exit_index = 0;
    double entry_price = 0.0;
    double exit_price = 0.0;
    double trade_return = 0.0;  // exit/entry - 1
};

/// Result of executing one signal stream against one series. The equity curve
/// starts at 1.0, stays flat while out of the market, and compounds the daily
/// price relative while long.
struct BacktestResult {
    std::vector<TradeRecord> trades;
    std::vector<double> equity_curve;
    double final_return = 0.0;
};

/// SMA crossover signals. Enter when the short average crosses strictly above
/// the long average (both were comparable the day before), exit on the mirror
/// cross from above. The first comparable day emits no signal since there is
/// no prior day to establish a cross.
inline SignalSeries momentum_signals(const PriceSeries& series, std::size_t short_window = 5,
                                     std::size_t long_window = 10) {
    if (short_window == 0 || short_window >= long_window || long_window > series.size())
        throw std::invalid_argument(series.symbol +
                                    ": need 0 < short_window < long_window <= length");
    const IndicatorSeries fast = sma(series.closes, short_window);
    const IndicatorSeries slow = sma(series.closes, long_window);

    SignalSeries out;
    out.valid_from = long_window - 1;
    out.markers.assign(series.size(), Signal::None);
    for (std::size_t i = out.valid_from + 1; i < series.size(); ++i) {
        const double f0 = fast.values[i - 1], f1 = fast.values[i];
        const double s0 = slow.values[i - 1], s1 = slow.values[i];
        if (f0 <= s0 && f1 > s1)
            out.markers[i] = Signal::Enter;
        else if (f0 >= s0 && f1 < s1)
            out.markers[i] = Signal::Exit;
    }
    return out;
}

/// Bollinger-band mean-reversion signals. Enter on the close breaking below
/// the lower band (first crossing, or the first comparable day if already
/// below); exit when the close crosses up through the middle band.
inline SignalSeries meanrev_signals(const PriceSeries& series, std::size_t window = 20,
                                    double k = 2.0) {
    if (window < 2 || window > series.size())
        throw std::invalid_argument(series.symbol + ": need 2 <= window <= length");
    const Bands bands = bollinger(series.closes, window, k);

    SignalSeries out;
    out.valid_from = window - 1;
    out.markers.assign(series.size(), Signal::None);
    const auto& c = series.closes;
    for (std::size_t i = out.valid_from; i < series.size(); ++i) {
        const bool below = c[i] < bands.lower.values[i];
        if (below && (i == out.valid_from || c[i - 1] >= bands.lower.values[i - 1])) {
            out.markers[i] = Signal::Enter;
        } else if (i > out.valid_from && c[i - 1] <= bands.middle.values[i - 1] &&
                   c[i] > bands.middle.values[i]) {
            out.markers[i] = Signal::Exit;
        }
    }
    return out;
}

/// Execute a long/flat signal stream. Fills at the signal day's close; Enter
/// while long and Exit while flat are no-ops; any open position is liquidated
/// at the final close. No costs or slippage are modeled.
inline BacktestResult run_backtest(const PriceSeries& series, const SignalSeries& signals) {
    if (signals.markers.size() != series.size())
        throw std::invalid_argument(series.symbol + ": signals misaligned with series");

    BacktestResult result;
    result.equity_curve.reserve(series.size());

    bool long_position = false;
    std::size_t entry_index = 0;
    double equity = 1.0;

    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i > 0 && long_position)
            equity *= series.closes[i] / series.closes[i - 1];
        result.equity_curve.push_back(equity);

        const bool last_bar = (i + 1 == series.size());
        const Signal marker = signals.markers[i];
        if (!long_position && marker == Signal::Enter && !last_bar) {
            long_position = true;
            entry_index = i;
        } else if (long_position && (marker == Signal::Exit || last_bar)) {
            TradeRecord trade;
            trade.entry_index = entry_index;
            trade.exit_index = i;
            trade.entry_price = series.closes[entry_index];
            trade.exit_price = series.closes[i];
            trade.trade_return = trade.exit_price / trade.entry_price - 1.0;
            result.trades.push_back(trade);
            long_position = false;
        }
    }
    result.final_return = equity - 1.0;
    return result;
}

/// The trade returns in execution order.
inline ReturnSequence per_trade_returns(const BacktestResult& result) {
    ReturnSequence out;
    out.log_scale = false;
    out.values.reserve(result.trades.size());
    for (const TradeRecord& t : result.trades) out.values.push_back(t.trade_return);
    return out;
}

}  // namespace hurstlab
