#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hurstlab/marketdata.hpp"

namespace hurstlab {

/// Rescaled-range estimate of the Hurst exponent with regression diagnostics.
struct HurstEstimate {
    double h = 0.5;         ///< OLS slope clamped to [0.01, 0.99]
    double raw_slope = 0.5; ///< unclamped slope, for diagnostics
    double r_squared = 0.0;
    std::vector<std::size_t> lags_used;
    std::size_t n_obs = 0;  ///< number of log-price increments
};

enum class Regime { Trending, MeanReverting };

inline const char* to_string(Regime r) {
    return r == Regime::Trending ? "trending" : "mean_reverting";
}

/// Mean rescaled range R/S over non-overlapping blocks of `block_size`
/// increments. Per block: R = range of the cumulative mean-adjusted sums,
/// S = population std of the block; blocks with S = 0 are skipped.
/// Throws if every block is degenerate.
inline double rs_statistic(std::span<const double> increments, std::size_t block_size) {
    if (block_size < 2)
        throw std::invalid_argument("rs_statistic: block_size must be >= 2");
    if (increments.size() < block_size)
        throw std::invalid_argument("rs_statistic: fewer increments than block_size");

    const std::size_t blocks = increments.size() / block_size;
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        const auto block = increments.subspan(b * block_size, block_size);
        double mean = 0.0;
        for (double v : block) mean += v;
        mean /= static_cast<double>(block_size);

        double cum = 0.0, lo = 0.0, hi = 0.0, sq = 0.0;
        for (double v : block) {
            const double dev = v - mean;
            cum += dev;
            lo = std::min(lo, cum);
            hi = std::max(hi, cum);
            sq += dev * dev;
        }
        const double s = std::sqrt(sq / static_cast<double>(block_size));
        if (s > 0.0) {
            total += (hi - lo) / s;
            ++used;
        }
    }
    if (used == 0)
        throw std::runtime_error("rs_statistic: all blocks degenerate (zero variance)");
    return total / static_cast<double>(used);
}

/// R/S analysis of the log-price increments: evaluate rs_statistic over the
/// lag grid {8, 16, 32, ..., <= n_obs/2}, regress ln(R/S) on ln(lag), and
/// take the slope as H. The slope is clamped to [0.01, 0.99]; the raw value
/// is kept for diagnostics. Requires at least 65 observations so the grid
/// holds three points.
inline HurstEstimate estimate_hurst(const PriceSeries& series) {
    if (series.size() < 65)
        throw std::invalid_argument(series.symbol + ": need >= 65 observations, have " +
                                    std::to_string(series.size()));
    const ReturnSequence increments = log_returns(series);
    const std::size_t n = increments.values.size();

    HurstEstimate est;
    est.n_obs = n;

    std::vector<double> xs, ys;
    for (std::size_t lag = 8; lag <= n / 2; lag *= 2) {
        double rs;
        try {
            rs = rs_statistic(increments.values, lag);
        } catch (const std::runtime_error&) {
            continue;  // all blocks at this lag were constant
        }
        if (!(rs > 0.0) || !std::isfinite(rs)) continue;
        est.lags_used.push_back(lag);
        xs.push_back(std::log(static_cast<double>(lag)));
        ys.push_back(std::log(rs));
    }
    if (xs.size() < 3)
        throw std::runtime_error(series.symbol + ": fewer than 3 usable lag points");

    const std::size_t m = xs.size();
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < m; ++i) { mx += xs[i]; my += ys[i]; }
    mx /= static_cast<double>(m);
    my /= static_cast<double>(m);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    est.raw_slope = sxy / sxx;
    est.h = std::clamp(est.raw_slope, 0.01, 0.99);
    est.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return est;
}

/// Binary regime rule: h > boundary is trending, h <= boundary mean-reverting.
/// The tie goes to MeanReverting so the rule is deterministic in floating point.
inline Regime classify(double h, double boundary = 0.5) {
    return h > boundary ? Regime::Trending : Regime::MeanReverting;
}

}  // namespace hurstlab
