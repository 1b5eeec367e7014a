#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace hurstlab {

/// Values aligned index-for-index with the source series. Entries before
/// valid_from are NaN (warmup); consumers must not read them.
struct IndicatorSeries {
    std::vector<double> values;
    std::size_t valid_from = 0;

    bool defined(std::size_t i) const { return i >= valid_from && i < values.size(); }
};

/// Lower/middle/upper Bollinger curves with identical alignment.
struct Bands {
    IndicatorSeries lower;
    IndicatorSeries middle;
    IndicatorSeries upper;
};

namespace detail {

/// Mean and population std of one window, computed relative to the first
/// element so constant windows give the constant and exactly zero std.
inline void window_mean_std(std::span<const double> window, double& mean, double& std_pop) {
    const double ref = window.front();
    double sum = 0.0;
    for (double v : window) sum += v - ref;
    const double centered_mean = sum / static_cast<double>(window.size());
    mean = ref + centered_mean;
    double sq = 0.0;
    for (double v : window) {
        const double dev = (v - ref) - centered_mean;
        sq += dev * dev;
    }
    std_pop = std::sqrt(sq / static_cast<double>(window.size()));
}

}  // namespace detail

/// Simple moving average over the trailing `window` values.
inline IndicatorSeries sma(std::span<const double> values, std::size_t window) {
    if (window == 0 || window > values.size())
        throw std::invalid_argument("sma: window must be in [1, length]");
    IndicatorSeries out;
    out.valid_from = window - 1;
    out.values.assign(values.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = window - 1; i < values.size(); ++i) {
        double mean, sd;
        detail::window_mean_std(values.subspan(i - window + 1, window), mean, sd);
        out.values[i] = mean;
    }
    return out;
}

/// Population (divide-by-n) standard deviation over the trailing window.
/// Population by convention for Bollinger bands; cross-sectional summary
/// statistics use the sample form instead (see stats.hpp).
inline IndicatorSeries rolling_std(std::span<const double> values, std::size_t window) {
    if (window < 2 || window > values.size())
        throw std::invalid_argument("rolling_std: window must be in [2, length]");
    IndicatorSeries out;
    out.valid_from = window - 1;
    out.values.assign(values.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = window - 1; i < values.size(); ++i) {
        double mean, sd;
        detail::window_mean_std(values.subspan(i - window + 1, window), mean, sd);
        out.values[i] = sd;
    }
    return out;
}

/// Bollinger bands: middle = sma(window), upper/lower = middle +- k * std.
inline Bands bollinger(std::span<const double> values, std::size_t window = 20, double k = 2.0) {
    if (k < 0.0)
        throw std::invalid_argument("bollinger: k must be >= 0");
    Bands bands;
    bands.middle = sma(values, window);
    IndicatorSeries sd = rolling_std(values, window);
    bands.upper.valid_from = bands.lower.valid_from = bands.middle.valid_from;
    bands.upper.values.assign(values.size(), std::numeric_limits<double>::quiet_NaN());
    bands.lower.values.assign(values.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = bands.middle.valid_from; i < values.size(); ++i) {
        bands.upper.values[i] = bands.middle.values[i] + k * sd.values[i];
        bands.lower.values[i] = bands.middle.values[i] - k * sd.values[i];
    }
    return bands;
}

/// Streaming counterpart of sma/rolling_std: feed one value at a time, read
/// the statistics once `ready()`. Each push reprocesses the window buffer
/// with the same arithmetic as the batch functions, so the two agree exactly.
class RollingStats {
public:
    explicit RollingStats(std::size_t window) : window_(window) {
        if (window < 2) throw std::invalid_argument("RollingStats: window must be >= 2");
        buffer_.resize(window);
        ordered_.resize(window);
    }

    void push(double value) {
        buffer_[pos_] = value;
        pos_ = (pos_ + 1) % window_;
        if (count_ < window_) ++count_;
        if (count_ == window_) {
            for (std::size_t i = 0; i < window_; ++i)
                ordered_[i] = buffer_[(pos_ + i) % window_];
            detail::window_mean_std(ordered_, mean_, std_);
        }
    }

    bool ready() const { return count_ == window_; }
    double mean() const { return mean_; }
    double std_pop() const { return std_; }

private:
    std::size_t window_;
    std::vector<double> buffer_;
    std::vector<double> ordered_;
    std::size_t pos_ = 0;
    std::size_t count_ = 0;
    double mean_ = std::numeric_limits<double>::quiet_NaN();
    double std_ = std::numeric_limits<double>::quiet_NaN();
};

}  // namespace hurstlab
