#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace hurstlab {

/// Cross-sectional summary. std is the sample (n-1) standard deviation;
/// for n = 1 it is reported as 0 with degenerate_std set.
struct SummaryStats {
    double mean = 0.0;
    double median = 0.0;
    double std = 0.0;
    std::size_t n = 0;
    bool degenerate_std = false;
};

struct HistogramData {
    std::vector<double> bin_edges;   // length = counts.size() + 1, increasing
    std::vector<std::size_t> counts;
};

inline SummaryStats summary(std::span<const double> values) {
    if (values.empty())
        throw std::invalid_argument("summary: empty input");
    SummaryStats s;
    s.n = values.size();

    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = s.n / 2;
    s.median = (s.n % 2 == 1) ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

    if (s.n >= 2) {
        double sq = 0.0;
        for (double v : values) sq += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(sq / static_cast<double>(s.n - 1));
    } else {
        s.std = 0.0;
        s.degenerate_std = true;
    }
    return s;
}

/// Equal-width histogram. A value lands in bin i when edge_i <= v < edge_{i+1};
/// the last bin is closed on the right. Without an explicit range, [min, max]
/// of the data is used; a zero-width range is widened by +-0.5 when there is a
/// single bin and rejected otherwise.
inline HistogramData histogram(std::span<const double> values, std::size_t bin_count,
                               std::optional<std::pair<double, double>> range = std::nullopt) {
    if (values.empty())
        throw std::invalid_argument("histogram: empty input");
    if (bin_count == 0)
        throw std::invalid_argument("histogram: bin_count must be >= 1");

    double lo, hi;
    if (range) {
        lo = range->first;
        hi = range->second;
        if (hi < lo) throw std::invalid_argument("histogram: invalid range");
    } else {
        lo = *std::min_element(values.begin(), values.end());
        hi = *std::max_element(values.begin(), values.end());
    }
    if (lo == hi) {
        if (bin_count > 1)
            throw std::invalid_argument("histogram: zero-width range with bin_count > 1");
        lo -= 0.5;
        hi += 0.5;
    }

    HistogramData h;
    h.bin_edges.resize(bin_count + 1);
    const double width = (hi - lo) / static_cast<double>(bin_count);
    for (std::size_t i = 0; i <= bin_count; ++i)
        h.bin_edges[i] = lo + width * static_cast<double>(i);
    h.bin_edges.back() = hi;  // guard against rounding past the data max
    h.counts.assign(bin_count, 0);

    for (double v : values) {
        if (v < lo || v > hi) continue;
        std::size_t bin;
        if (v == hi) {
            bin = bin_count - 1;
        } else {
            bin = static_cast<std::size_t>((v - lo) / width);
            if (bin >= bin_count) bin = bin_count - 1;
            // the division can land one bin high/low at edges; snap to the rule
            while (bin > 0 && v < h.bin_edges[bin]) --bin;
            while (bin + 1 < bin_count && v >= h.bin_edges[bin + 1]) ++bin;
        }
        ++h.counts[bin];
    }
    return h;
}

/// Sharpe ratio (mean - risk_free) / std at whatever horizon the inputs share;
/// no annualization is applied.
inline double sharpe(double mean_return, double std_return, double risk_free = 0.02) {
    if (!(std_return > 0.0))
        throw std::invalid_argument("sharpe: std_return must be > 0");
    return (mean_return - risk_free) / std_return;
}

}  // namespace hurstlab
