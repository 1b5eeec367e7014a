#pragma once

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hurstlab/marketdata.hpp"
#include "hurstlab/rng.hpp"

namespace testutil {

/// Unique scratch directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<unsigned> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        path_ = base / ("hurstlab-test-" + std::to_string(::getpid()) + "-" +
                        std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// Regime-switching planted-signal series: alternating "armed" and "quiet"
/// blocks of seeded random length. Armed blocks carry log drift
/// ln(1+signal) - sigma^2/2, so the lognormal mean of the next-day simple
/// return is exactly `signal` there and exactly zero in quiet blocks. The
/// armed drift pushes the 5/10 MA spread into its top quantile bin, which is
/// where the signal concentrates.
struct PlantedParams {
    double signal = 0.005;
    double sigma = 0.007;
    std::uint64_t armed_lo = 30, armed_hi = 50;
    std::uint64_t quiet_lo = 120, quiet_hi = 200;
};

/// Returns the series plus the per-day armed flags (armed[t] set when the
/// return accruing from t to t+1 has mean `signal`).
inline hurstlab::PriceSeries synth_planted(std::size_t n, std::uint64_t seed,
                                           const PlantedParams& params = {},
                                           std::vector<bool>* armed_out = nullptr) {
    hurstlab::GaussianRng gauss(seed);
    hurstlab::SplitMix64 blocks(hurstlab::derive_seed(seed, 0xb10c));

    auto block_len = [&](std::uint64_t lo, std::uint64_t hi) {
        return lo + blocks.next_u64() % (hi - lo + 1);
    };

    const double mu_armed = std::log1p(params.signal) - 0.5 * params.sigma * params.sigma;
    const double mu_quiet = -0.5 * params.sigma * params.sigma;

    hurstlab::PriceSeries series{"PL",
                                 {},
                                 {}};
    series.dates.reserve(n);
    series.closes.reserve(n);
    const auto base = hurstlab::kSyntheticStart.serial();
    for (std::size_t i = 0; i < n; ++i)
        series.dates.push_back(hurstlab::Date::from_serial(base + static_cast<std::int64_t>(i)));

    if (armed_out) armed_out->assign(n, false);
    bool armed = false;
    std::uint64_t left = block_len(params.quiet_lo, params.quiet_hi);
    double x = std::log(100.0);
    series.closes.push_back(std::exp(x));
    for (std::size_t t = 1; t < n; ++t) {
        if (left == 0) {
            armed = !armed;
            left = armed ? block_len(params.armed_lo, params.armed_hi)
                         : block_len(params.quiet_lo, params.quiet_hi);
        }
        if (armed_out) (*armed_out)[t - 1] = armed;
        x += (armed ? mu_armed : mu_quiet) + params.sigma * gauss.next();
        series.closes.push_back(std::exp(x));
        --left;
    }
    return series;
}

/// Brute-force trailing mean of values[i-window+1 .. i] by direct summation.
inline double brute_ma(const std::vector<double>& values, std::size_t i, std::size_t window) {
    double sum = 0.0;
    for (std::size_t j = i + 1 - window; j <= i; ++j) sum += values[j];
    return sum / static_cast<double>(window);
}

inline double brute_mean(const std::vector<double>& values) {
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace testutil
