#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "hurstlab/dates.hpp"
#include "hurstlab/rng.hpp"

namespace hurstlab {

/// One symbol's ordered daily closing prices.
/// Invariants: dates strictly increasing, closes strictly positive and finite,
/// same length, at least one observation.
struct PriceSeries {
    std::string symbol;
    std::vector<Date> dates;
    std::vector<double> closes;

    std::size_t size() const { return closes.size(); }
};

/// Per-period returns; `log_scale` says whether values are log or simple returns.
struct ReturnSequence {
    std::vector<double> values;
    bool log_scale = false;
};

inline void validate(const PriceSeries& series) {
    if (series.dates.size() != series.closes.size())
        throw std::invalid_argument(series.symbol + ": dates/closes length mismatch");
    if (series.closes.empty())
        throw std::invalid_argument(series.symbol + ": empty series");
    for (std::size_t i = 0; i < series.closes.size(); ++i) {
        const double c = series.closes[i];
        if (!std::isfinite(c) || c <= 0.0)
            throw std::invalid_argument(series.symbol + ": non-positive price at " +
                                        series.dates[i].to_string());
        if (i > 0 && !(series.dates[i - 1] < series.dates[i]))
            throw std::invalid_argument(series.symbol + ": non-increasing dates at " +
                                        series.dates[i].to_string());
    }
}

namespace detail {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& token) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc{} || res.ptr != last)
        throw std::invalid_argument("non-numeric value: '" + token + "'");
    return v;
}

}  // namespace detail

/// Load a `date,close` CSV. The symbol is the file stem.
/// Format: header line `date,close`, ISO-8601 dates, `.` decimal separator.
inline PriceSeries load_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());

    PriceSeries series;
    series.symbol = path.stem().string();

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "date,close")
        throw std::runtime_error(path.string() + ": expected header 'date,close'");

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": malformed row");
        Date date;
        double close;
        try {
            date = Date::parse(line.substr(0, comma));
            close = detail::parse_double(line.substr(comma + 1));
        } catch (const std::exception& e) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": " +
                                     e.what());
        }
        if (!std::isfinite(close) || close <= 0.0)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": non-positive price");
        if (!series.dates.empty() && !(series.dates.back() < date))
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": non-increasing dates");
        series.dates.push_back(date);
        series.closes.push_back(close);
    }
    if (series.closes.empty())
        throw std::runtime_error(path.string() + ": empty file");
    return series;
}

/// Inverse of load_csv: load_csv(write_csv(s)) reproduces (date, close) exactly.
inline void write_csv(const PriceSeries& series, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << "date,close\n";
    for (std::size_t i = 0; i < series.size(); ++i)
        out << series.dates[i].to_string() << ',' << detail::format_double(series.closes[i])
            << '\n';
    if (!out)
        throw std::runtime_error("write failed: " + path.string());
}

/// Split into (dates < split_date, dates >= split_date). Both parts must be
/// non-empty; their concatenation reproduces the input.
inline std::pair<PriceSeries, PriceSeries> split_at(const PriceSeries& series, Date split_date) {
    if (series.size() < 2)
        throw std::invalid_argument(series.symbol + ": series too short to split");
    std::size_t cut = 0;
    while (cut < series.size() && series.dates[cut] < split_date) ++cut;
    if (cut == 0)
        throw std::invalid_argument(series.symbol + ": empty first part at " +
                                    split_date.to_string());
    if (cut == series.size())
        throw std::invalid_argument(series.symbol + ": empty second part at " +
                                    split_date.to_string());
    PriceSeries first{series.symbol,
                      {series.dates.begin(), series.dates.begin() + cut},
                      {series.closes.begin(), series.closes.begin() + cut}};
    PriceSeries second{series.symbol,
                       {series.dates.begin() + cut, series.dates.end()},
                       {series.closes.begin() + cut, series.closes.end()}};
    return {std::move(first), std::move(second)};
}

/// Log returns: value_i = ln(close_{i+1} / close_i).
inline ReturnSequence log_returns(const PriceSeries& series) {
    if (series.size() < 2)
        throw std::invalid_argument(series.symbol + ": need at least 2 observations");
    ReturnSequence out;
    out.log_scale = true;
    out.values.reserve(series.size() - 1);
    for (std::size_t i = 0; i + 1 < series.size(); ++i)
        out.values.push_back(std::log(series.closes[i + 1] / series.closes[i]));
    return out;
}

/// Calendar used by all synthetic generators: consecutive days from here.
inline constexpr Date kSyntheticStart{2018, 1, 1};

namespace detail {

inline std::vector<Date> synthetic_dates(std::size_t n, Date start) {
    std::vector<Date> dates;
    dates.reserve(n);
    const std::int64_t base = start.serial();
    for (std::size_t i = 0; i < n; ++i) dates.push_back(Date::from_serial(base + static_cast<std::int64_t>(i)));
    return dates;
}

}  // namespace detail

/// Geometric random walk: log-price x_t = x_{t-1} + sigma * z_t, x_0 = 0,
/// prices p_t = p0 * exp(x_t). The H = 0.5 reference process.
inline PriceSeries synth_random_walk(std::size_t n, std::uint64_t seed, double sigma,
                                     double p0 = 100.0, Date start = kSyntheticStart) {
    if (n == 0) throw std::invalid_argument("synth_random_walk: n must be >= 1");
    if (sigma < 0.0) throw std::invalid_argument("synth_random_walk: sigma must be >= 0");
    if (p0 <= 0.0) throw std::invalid_argument("synth_random_walk: p0 must be > 0");
    GaussianRng rng(seed);
    PriceSeries series{"RW", detail::synthetic_dates(n, start), {}};
    series.closes.reserve(n);
    double x = 0.0;
    series.closes.push_back(p0);
    for (std::size_t t = 1; t < n; ++t) {
        x += sigma * rng.next();
        series.closes.push_back(p0 * std::exp(x));
    }
    return series;
}

/// Discrete Ornstein-Uhlenbeck on the log-price (Euler step):
///   x_t = x_{t-1} + theta * (mu - x_{t-1}) + sigma * z_t,  prices exp(x_t).
/// The anti-persistent (H < 0.5) reference process.
inline PriceSeries synth_ou(std::size_t n, std::uint64_t seed, double theta, double mu,
                            double sigma, double x0, Date start = kSyntheticStart) {
    if (n == 0) throw std::invalid_argument("synth_ou: n must be >= 1");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("synth_ou: theta must be in (0,1)");
    if (sigma < 0.0) throw std::invalid_argument("synth_ou: sigma must be >= 0");
    GaussianRng rng(seed);
    PriceSeries series{"OU", detail::synthetic_dates(n, start), {}};
    series.closes.reserve(n);
    double x = x0;
    series.closes.push_back(std::exp(x));
    for (std::size_t t = 1; t < n; ++t) {
        x += theta * (mu - x) + sigma * rng.next();
        series.closes.push_back(std::exp(x));
    }
    return series;
}

/// AR(1) log-price increments: d_t = phi * d_{t-1} + sigma * z_t, d_0 = 0.
/// Persistent (H > 0.5) for phi > 0; phi = 0 reproduces synth_random_walk.
inline PriceSeries synth_persistent(std::size_t n, std::uint64_t seed, double phi, double sigma,
                                    double p0 = 100.0, Date start = kSyntheticStart) {
    if (n == 0) throw std::invalid_argument("synth_persistent: n must be >= 1");
    if (!(phi >= 0.0 && phi < 1.0))
        throw std::invalid_argument("synth_persistent: phi must be in [0,1)");
    if (sigma < 0.0) throw std::invalid_argument("synth_persistent: sigma must be >= 0");
    if (p0 <= 0.0) throw std::invalid_argument("synth_persistent: p0 must be > 0");
    GaussianRng rng(seed);
    PriceSeries series{"AR", detail::synthetic_dates(n, start), {}};
    series.closes.reserve(n);
    double x = 0.0;
    double d = 0.0;
    series.closes.push_back(p0);
    for (std::size_t t = 1; t < n; ++t) {
        d = phi * d + sigma * rng.next();
        x += d;
        series.closes.push_back(p0 * std::exp(x));
    }
    return series;
}

}  // namespace hurstlab
