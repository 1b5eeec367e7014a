#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hurstlab/indicators.hpp"
#include "hurstlab/marketdata.hpp"
#include "hurstlab/rng.hpp"

namespace hurstlab {

/// Daily actions available to the agent. Abstain is only ever emitted by the
/// restricted policy; training considers Long and Short.
enum class TradeAction { Long = 0, Short = 1, Abstain = 2 };

enum class PolicyMode { Forced, Restricted };

inline const char* to_string(TradeAction a) {
    switch (a) {
        case TradeAction::Long: return "long";
        case TradeAction::Short: return "short";
        default: return "abstain";
    }
}

inline const char* to_string(PolicyMode m) {
    return m == PolicyMode::Forced ? "forced" : "restricted";
}

/// State space: the relative short-minus-long moving-average spread at t and
/// at t-1, each discretized into quantile bins. The same edges serve both
/// dimensions since both sample the same feature population.
struct StateSpec {
    std::size_t short_window = 5;
    std::size_t long_window = 10;
    std::size_t bins_per_dim = 5;
    std::vector<double> edges;  // strictly increasing; fewer than bins_per_dim-1
                                // entries when duplicate quantiles collapsed

    std::size_t effective_bins() const { return edges.size() + 1; }
    std::size_t state_count() const { return effective_bins() * effective_bins(); }
    bool collapsed() const {
        return bins_per_dim >= 1 && edges.size() + 1 < bins_per_dim;
    }
};

struct StateId {
    std::uint32_t bin_now = 0;
    std::uint32_t bin_prev = 0;
    bool operator==(const StateId&) const = default;
};

/// Q estimate plus running reward moments (count, mean, and M2 for variance).
struct QCell {
    double q = 0.0;
    double mean = 0.0;
    double m2 = 0.0;
    std::uint64_t n = 0;

    double variance() const { return n >= 2 ? m2 / static_cast<double>(n - 1) : 0.0; }
};

struct Hyperparams {
    double alpha = 0.0;       ///< fixed step size in (0,1]; 0 selects harmonic 1/(n+1)
    double gamma = 0.0;       ///< discount; 0 treats the problem as a contextual bandit
    double epsilon = 0.1;     ///< exploration rate for the single-action mode
    bool both_action = true;  ///< update Long and Short from the same observed return
    double t_threshold = 1.96;
    std::uint64_t n_min = 30;
    std::uint64_t seed = 0;
};

/// Trained state-action table. Immutable once trained; safe to share across
/// threads for concurrent evaluation.
struct QTable {
    StateSpec spec;
    Hyperparams params;
    std::vector<std::array<QCell, 2>> cells;  // [state][action], Long=0 Short=1
    std::uint64_t total_steps = 0;
    std::string train_date_min;  // empty when unknown
    std::string train_date_max;

    std::size_t index_of(StateId s) const {
        return static_cast<std::size_t>(s.bin_now) * spec.effective_bins() + s.bin_prev;
    }
    const QCell& cell(StateId s, TradeAction a) const {
        return cells[index_of(s)][static_cast<std::size_t>(a)];
    }
};

/// Relative MA spread d_t = (sma_short[t] - sma_long[t]) / sma_long[t].
/// Normalizing by the long average makes the feature scale-free, so one
/// discretization works across equities at different price levels.
inline double momentum_feature(const PriceSeries& series, std::size_t t, const StateSpec& spec) {
    if (t + 1 < spec.long_window || t >= series.size())
        throw std::invalid_argument(series.symbol + ": feature index inside warmup");
    double mean_s, mean_l, sd;
    detail::window_mean_std(
        std::span<const double>(series.closes).subspan(t - spec.short_window + 1, spec.short_window),
        mean_s, sd);
    detail::window_mean_std(
        std::span<const double>(series.closes).subspan(t - spec.long_window + 1, spec.long_window),
        mean_l, sd);
    return (mean_s - mean_l) / mean_l;
}

/// Bin edges at the empirical quantiles k/bins_per_dim, k = 1..bins_per_dim-1,
/// using linear interpolation between order statistics. Duplicate edges are
/// collapsed to keep the sequence strictly increasing (degenerate data then
/// yields fewer effective bins; see StateSpec::collapsed).
inline std::vector<double> fit_bins(std::span<const double> features, std::size_t bins_per_dim) {
    if (features.empty())
        throw std::invalid_argument("fit_bins: empty features");
    if (bins_per_dim == 0)
        throw std::invalid_argument("fit_bins: bins_per_dim must be >= 1");
    if (bins_per_dim == 1) return {};

    std::vector<double> sorted(features.begin(), features.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();

    std::vector<double> edges;
    edges.reserve(bins_per_dim - 1);
    for (std::size_t k = 1; k < bins_per_dim; ++k) {
        const double p = static_cast<double>(k) / static_cast<double>(bins_per_dim);
        const double pos = p * static_cast<double>(n - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const double frac = pos - static_cast<double>(lo);
        const double edge =
            lo + 1 < n ? sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]) : sorted[lo];
        if (edges.empty() || edge > edges.back()) edges.push_back(edge);
    }
    return edges;
}

/// Map one value to its bin: below the first edge -> 0, at or above the last
/// edge -> last bin, values equal to an edge go to the bin above it.
inline std::uint32_t bin_of(double value, std::span<const double> edges) {
    const auto it = std::upper_bound(edges.begin(), edges.end(), value);
    return static_cast<std::uint32_t>(it - edges.begin());
}

inline StateId state_of(double d_now, double d_prev, const StateSpec& spec) {
    return StateId{bin_of(d_now, spec.edges), bin_of(d_prev, spec.edges)};
}

/// Close-to-close next-day return: +r for Long, -r for Short, 0 for Abstain.
inline double reward(const PriceSeries& series, std::size_t t, TradeAction action) {
    if (t + 1 >= series.size())
        throw std::invalid_argument(series.symbol + ": no next close at final bar");
    const double r = series.closes[t + 1] / series.closes[t] - 1.0;
    switch (action) {
        case TradeAction::Long: return r;
        case TradeAction::Short: return -r;
        default: return 0.0;
    }
}

/// One Q-learning step q <- q + alpha (r + gamma max_a' Q(s',a') - q), with
/// the cell's reward moments updated by the one-pass (Welford) recurrence.
/// alpha <= 0 selects the harmonic schedule 1/(n+1), under which q with
/// gamma = 0 is exactly the running reward mean.
inline void q_update(QCell& cell, double r, double alpha, double gamma, double max_next_q) {
    if (alpha > 1.0)
        throw std::invalid_argument("q_update: alpha must be in (0,1] or harmonic");
    if (!(gamma >= 0.0 && gamma < 1.0))
        throw std::invalid_argument("q_update: gamma must be in [0,1)");
    const double target = r + gamma * max_next_q;
    const double count = static_cast<double>(cell.n + 1);
    if (alpha <= 0.0)
        cell.q += (target - cell.q) / count;
    else
        cell.q += alpha * (target - cell.q);

    cell.n += 1;
    const double delta = r - cell.mean;
    cell.mean += delta / count;
    cell.m2 += delta * (r - cell.mean);
}

namespace detail {

inline TradeAction argmax_action(const std::array<QCell, 2>& cells) {
    // tie goes to Long
    return cells[0].q >= cells[1].q ? TradeAction::Long : TradeAction::Short;
}

inline std::vector<double> feature_series(const PriceSeries& series, const StateSpec& spec) {
    std::vector<double> d(series.size(), std::numeric_limits<double>::quiet_NaN());
    if (series.size() < spec.long_window) return d;
    const IndicatorSeries fast = sma(series.closes, spec.short_window);
    const IndicatorSeries slow = sma(series.closes, spec.long_window);
    for (std::size_t t = spec.long_window - 1; t < series.size(); ++t)
        d[t] = (fast.values[t] - slow.values[t]) / slow.values[t];
    return d;
}

}  // namespace detail

/// Train over every equity in order, stepping each one chronologically. In the
/// default both-action mode the reward of the untaken action is its exact
/// negation and fully observable, so both cells are updated per step and no
/// exploration is needed; the epsilon-greedy single-action mode is kept behind
/// `both_action = false`. Bin edges are fitted on the pooled training features
/// when the StateSpec does not carry them already. Series too short for warmup
/// plus one reward are skipped; it is an error if none remain.
inline QTable train(std::span<const PriceSeries> universe, StateSpec spec,
                    const Hyperparams& params) {
    if (universe.empty())
        throw std::invalid_argument("train: empty universe");
    if (spec.short_window == 0 || spec.short_window >= spec.long_window)
        throw std::invalid_argument("train: need 0 < short_window < long_window");
    if (params.alpha > 1.0)
        throw std::invalid_argument("train: alpha must be in (0,1] or harmonic");
    if (!(params.gamma >= 0.0 && params.gamma < 1.0))
        throw std::invalid_argument("train: gamma must be in [0,1)");

    const std::size_t min_length = spec.long_window + 2;  // warmup + one reward

    if (spec.edges.empty() && spec.bins_per_dim > 1) {
        std::vector<double> pooled;
        for (const PriceSeries& series : universe) {
            if (series.size() < min_length) continue;
            const auto d = detail::feature_series(series, spec);
            pooled.insert(pooled.end(), d.begin() + static_cast<std::ptrdiff_t>(spec.long_window - 1),
                          d.end());
        }
        if (pooled.empty())
            throw std::invalid_argument("train: all series too short");
        spec.edges = fit_bins(pooled, spec.bins_per_dim);
    }

    QTable table;
    table.spec = std::move(spec);
    table.params = params;
    table.cells.assign(table.spec.state_count(), {});

    SplitMix64 explore_rng(params.seed);
    Date date_min{9999, 12, 31}, date_max{1, 1, 1};
    bool any_dates = false;

    for (const PriceSeries& series : universe) {
        if (series.size() < min_length) continue;
        const auto d = detail::feature_series(series, table.spec);

        for (std::size_t t = table.spec.long_window; t + 1 < series.size(); ++t) {
            const StateId s = state_of(d[t], d[t - 1], table.spec);
            const StateId s_next = state_of(d[t + 1], d[t], table.spec);
            auto& pair = table.cells[table.index_of(s)];
            const auto& next_pair = table.cells[table.index_of(s_next)];
            const double max_next = std::max(next_pair[0].q, next_pair[1].q);
            const double r = reward(series, t, TradeAction::Long);

            if (params.both_action) {
                q_update(pair[0], r, params.alpha, params.gamma, max_next);
                q_update(pair[1], -r, params.alpha, params.gamma, max_next);
            } else {
                TradeAction a = detail::argmax_action(pair);
                if (explore_rng.next_double() < params.epsilon)
                    a = explore_rng.next_double() < 0.5 ? TradeAction::Long : TradeAction::Short;
                q_update(pair[static_cast<std::size_t>(a)],
                         a == TradeAction::Long ? r : -r, params.alpha, params.gamma, max_next);
            }
            ++table.total_steps;
        }
        if (!series.dates.empty()) {
            any_dates = true;
            date_min = std::min(date_min, series.dates.front());
            date_max = std::max(date_max, series.dates.back());
        }
    }
    if (table.total_steps == 0)
        throw std::invalid_argument("train: all series too short");
    if (any_dates) {
        table.train_date_min = date_min.to_string();
        table.train_date_max = date_max.to_string();
    }
    return table;
}

/// Act at one state. Forced always takes the argmax action (Long on ties and
/// unseen states). Restricted takes the argmax only when its reward history
/// is significantly nonzero: n >= n_min and |mean| / (std / sqrt(n)) >=
/// t_threshold with the sample std; otherwise it abstains.
inline TradeAction policy_act(const QTable& table, StateId s, PolicyMode mode,
                              double t_threshold = 1.96, std::uint64_t n_min = 30) {
    const auto& pair = table.cells[table.index_of(s)];
    if (pair[0].n == 0 && pair[1].n == 0)
        return mode == PolicyMode::Forced ? TradeAction::Long : TradeAction::Abstain;

    const TradeAction best = detail::argmax_action(pair);
    if (mode == PolicyMode::Forced) return best;

    const QCell& cell = pair[static_cast<std::size_t>(best)];
    if (cell.n < std::max<std::uint64_t>(n_min, 2)) return TradeAction::Abstain;
    const double sd = std::sqrt(cell.variance());
    if (sd == 0.0)
        return cell.mean != 0.0 ? best : TradeAction::Abstain;
    const double t_stat = std::abs(cell.mean) / (sd / std::sqrt(static_cast<double>(cell.n)));
    return t_stat >= t_threshold ? best : TradeAction::Abstain;
}

/// Evaluation of a trained table on one series (which must be disjoint from
/// the training data; the CLI checks date ranges when it has them).
struct Evaluation {
    std::vector<double> daily_returns;
    double sharpe = 0.0;      ///< mean/std of daily returns, zero risk-free
    bool degenerate = false;  ///< no return dispersion (e.g. abstained throughout)
    std::uint64_t n_long = 0;
    std::uint64_t n_short = 0;
    std::uint64_t n_abstain = 0;
};

inline Evaluation evaluate(const QTable& table, const PriceSeries& series, PolicyMode mode) {
    if (series.size() < table.spec.long_window + 2)
        throw std::invalid_argument(series.symbol + ": series too short to evaluate");
    const auto d = detail::feature_series(series, table.spec);

    Evaluation eval;
    for (std::size_t t = table.spec.long_window; t + 1 < series.size(); ++t) {
        const StateId s = state_of(d[t], d[t - 1], table.spec);
        const TradeAction a =
            policy_act(table, s, mode, table.params.t_threshold, table.params.n_min);
        switch (a) {
            case TradeAction::Long: ++eval.n_long; break;
            case TradeAction::Short: ++eval.n_short; break;
            default: ++eval.n_abstain; break;
        }
        eval.daily_returns.push_back(reward(series, t, a));
    }

    double mean = 0.0;
    for (double r : eval.daily_returns) mean += r;
    mean /= static_cast<double>(eval.daily_returns.size());
    double sq = 0.0;
    for (double r : eval.daily_returns) sq += (r - mean) * (r - mean);
    const double sd = eval.daily_returns.size() >= 2
                          ? std::sqrt(sq / static_cast<double>(eval.daily_returns.size() - 1))
                          : 0.0;
    if (sd > 0.0) {
        eval.sharpe = mean / sd;
    } else {
        eval.sharpe = 0.0;
        eval.degenerate = true;
    }
    return eval;
}

}  // namespace hurstlab
