#pragma once

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hurstlab/marketdata.hpp"
#include "hurstlab/qlearn.hpp"
#include "hurstlab/qlearn_json.hpp"
#include "hurstlab/selector.hpp"
#include "hurstlab/stats.hpp"
#include "hurstlab/version.hpp"

namespace hurstlab {

/// Fully resolved run parameters. Populated from defaults, then the config
/// file, then command-line flags (later sources win); echoed into every
/// report so runs are reproducible from their outputs.
struct RunConfig {
    std::string universe;
    std::string out = "out";
    std::string qtable;  // qeval input; defaults to <out>/qtable.json
    std::uint64_t seed = 1;
    unsigned threads = 0;
    Date split_date{2021, 7, 1};

    std::size_t short_window = 5;
    std::size_t long_window = 10;
    std::size_t band_window = 20;
    double band_k = 2.0;

    double boundary = 0.5;
    double grid_step = 0.01;
    std::size_t hist_bins = 30;

    std::string synth_kind = "randomwalk";  // randomwalk | ou | persistent
    std::size_t synth_count = 100;
    std::size_t synth_n = 2048;
    double synth_sigma = 0.01;
    double synth_theta = 0.3;
    double synth_mu = 4.605170185988092;  // ln(100)
    double synth_x0 = 4.605170185988092;
    double synth_phi = 0.6;
    double synth_p0 = 100.0;

    std::size_t bins_per_dim = 5;
    double alpha = 0.0;  // 0 = harmonic
    double gamma = 0.0;
    double epsilon = 0.1;
    bool both_action = true;
    double t_threshold = 1.96;
    std::uint64_t n_min = 30;
    std::string qeval_mode = "both";  // restricted | forced | both
};

inline nlohmann::json config_json(const RunConfig& c) {
    return {{"universe", c.universe},
            {"out", c.out},
            {"qtable", c.qtable},
            {"seed", c.seed},
            {"threads", c.threads},
            {"split_date", c.split_date.to_string()},
            {"short_window", c.short_window},
            {"long_window", c.long_window},
            {"band_window", c.band_window},
            {"band_k", c.band_k},
            {"boundary", c.boundary},
            {"grid_step", c.grid_step},
            {"hist_bins", c.hist_bins},
            {"synth_kind", c.synth_kind},
            {"synth_count", c.synth_count},
            {"synth_n", c.synth_n},
            {"synth_sigma", c.synth_sigma},
            {"synth_theta", c.synth_theta},
            {"synth_mu", c.synth_mu},
            {"synth_x0", c.synth_x0},
            {"synth_phi", c.synth_phi},
            {"synth_p0", c.synth_p0},
            {"bins_per_dim", c.bins_per_dim},
            {"alpha", c.alpha},
            {"gamma", c.gamma},
            {"epsilon", c.epsilon},
            {"both_action", c.both_action},
            {"t_threshold", c.t_threshold},
            {"n_min", c.n_min},
            {"qeval_mode", c.qeval_mode}};
}

/// Apply a flat key=value config file (# comments, blank lines allowed).
/// Keys mirror the names in config_json; unknown keys are rejected. Intended
/// to run before flag parsing so flags override file values.
inline void apply_config_file(RunConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path.string());

    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        const auto b = s.find_last_not_of(" \t\r");
        return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
    };

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text[0] == '#') continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": expected key=value");
        const std::string key = trim(text.substr(0, eq));
        const std::string value = trim(text.substr(eq + 1));

        try {
            if (key == "universe") config.universe = value;
            else if (key == "out") config.out = value;
            else if (key == "qtable") config.qtable = value;
            else if (key == "seed") config.seed = std::stoull(value);
            else if (key == "threads") config.threads = static_cast<unsigned>(std::stoul(value));
            else if (key == "split_date") config.split_date = Date::parse(value);
            else if (key == "short_window") config.short_window = std::stoul(value);
            else if (key == "long_window") config.long_window = std::stoul(value);
            else if (key == "band_window") config.band_window = std::stoul(value);
            else if (key == "band_k") config.band_k = std::stod(value);
            else if (key == "boundary") config.boundary = std::stod(value);
            else if (key == "grid_step") config.grid_step = std::stod(value);
            else if (key == "hist_bins") config.hist_bins = std::stoul(value);
            else if (key == "synth_kind") config.synth_kind = value;
            else if (key == "synth_count") config.synth_count = std::stoul(value);
            else if (key == "synth_n") config.synth_n = std::stoul(value);
            else if (key == "synth_sigma") config.synth_sigma = std::stod(value);
            else if (key == "synth_theta") config.synth_theta = std::stod(value);
            else if (key == "synth_mu") config.synth_mu = std::stod(value);
            else if (key == "synth_x0") config.synth_x0 = std::stod(value);
            else if (key == "synth_phi") config.synth_phi = std::stod(value);
            else if (key == "synth_p0") config.synth_p0 = std::stod(value);
            else if (key == "bins_per_dim") config.bins_per_dim = std::stoul(value);
            else if (key == "alpha") config.alpha = std::stod(value);
            else if (key == "gamma") config.gamma = std::stod(value);
            else if (key == "epsilon") config.epsilon = std::stod(value);
            else if (key == "both_action") config.both_action = value == "true" || value == "1";
            else if (key == "t_threshold") config.t_threshold = std::stod(value);
            else if (key == "n_min") config.n_min = std::stoull(value);
            else if (key == "qeval_mode") config.qeval_mode = value;
            else
                throw std::runtime_error("unknown config key '" + key + "'");
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": bad value for '" + key + "'");
        }
    }
}

namespace detail {

/// Write-temp-then-rename so readers never observe a partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j) {
    write_file_atomic(path, j.dump(2) + "\n");
}

inline std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char ch : field) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    quoted += '"';
    return quoted;
}

inline nlohmann::json stats_json(const SummaryStats& s) {
    return {{"mean", s.mean},
            {"median", s.median},
            {"std", s.std},
            {"n", s.n},
            {"degenerate_std", s.degenerate_std}};
}

inline std::string histogram_csv(const HistogramData& h) {
    std::string csv = "bin_left,bin_right,count\n";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        csv += format_double(h.bin_edges[i]);
        csv += ',';
        csv += format_double(h.bin_edges[i + 1]);
        csv += ',';
        csv += std::to_string(h.counts[i]);
        csv += '\n';
    }
    return csv;
}

/// All <SYMBOL>.csv files under `dir`, in filename order. Files that fail to
/// parse are recorded and skipped, never fatal.
inline std::vector<PriceSeries> load_universe(const std::filesystem::path& dir,
                                              std::vector<SkippedSymbol>& skipped) {
    if (!std::filesystem::is_directory(dir))
        throw std::runtime_error("universe directory not found: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());

    std::vector<PriceSeries> universe;
    universe.reserve(files.size());
    for (const auto& file : files) {
        try {
            universe.push_back(load_csv(file));
        } catch (const std::exception& e) {
            skipped.push_back({file.stem().string(), e.what()});
        }
    }
    if (universe.empty())
        throw std::runtime_error("no usable CSV files in " + dir.string());
    return universe;
}

/// Subseries with dates < cutoff (may be empty).
inline PriceSeries take_before(const PriceSeries& series, Date cutoff) {
    std::size_t n = 0;
    while (n < series.size() && series.dates[n] < cutoff) ++n;
    return PriceSeries{series.symbol,
                       {series.dates.begin(), series.dates.begin() + n},
                       {series.closes.begin(), series.closes.begin() + n}};
}

/// Subseries with dates >= cutoff (may be empty).
inline PriceSeries take_from(const PriceSeries& series, Date cutoff) {
    std::size_t n = 0;
    while (n < series.size() && series.dates[n] < cutoff) ++n;
    return PriceSeries{series.symbol,
                       {series.dates.begin() + n, series.dates.end()},
                       {series.closes.begin() + n, series.closes.end()}};
}

inline void write_skipped_csv(const std::filesystem::path& path,
                              const std::vector<SkippedSymbol>& skipped) {
    std::string csv = "symbol,reason\n";
    for (const auto& s : skipped) csv += csv_quote(s.symbol) + ',' + csv_quote(s.reason) + '\n';
    write_file_atomic(path, csv);
}

inline void write_config_json(const RunConfig& config) {
    nlohmann::json j{{"version", kVersion}, {"config", config_json(config)}};
    write_json_atomic(std::filesystem::path(config.out) / "config.json", j);
}

}  // namespace detail

/// Generate a universe of synthetic series as <SYMBOL>.csv files. Symbol i
/// draws from an independent stream derived from (seed, i), so re-running
/// with the same parameters reproduces the files byte for byte.
inline void cmd_synth(const RunConfig& config) {
    if (config.synth_count == 0)
        throw std::invalid_argument("synth: count must be >= 1");
    const std::string& kind = config.synth_kind;
    if (kind != "randomwalk" && kind != "ou" && kind != "persistent")
        throw std::invalid_argument("synth: unknown kind '" + kind + "'");

    std::filesystem::create_directories(config.out);
    const char* prefix = kind == "randomwalk" ? "RW" : (kind == "ou" ? "OU" : "AR");

    for (std::size_t i = 0; i < config.synth_count; ++i) {
        const std::uint64_t seed_i = derive_seed(config.seed, i);
        PriceSeries series;
        if (kind == "randomwalk")
            series = synth_random_walk(config.synth_n, seed_i, config.synth_sigma, config.synth_p0);
        else if (kind == "ou")
            series = synth_ou(config.synth_n, seed_i, config.synth_theta, config.synth_mu,
                              config.synth_sigma, config.synth_x0);
        else
            series = synth_persistent(config.synth_n, seed_i, config.synth_phi, config.synth_sigma,
                                      config.synth_p0);

        char name[16];
        std::snprintf(name, sizeof(name), "%s%04zu", prefix, i);
        series.symbol = name;

        std::ostringstream body;
        body << "date,close\n";
        for (std::size_t t = 0; t < series.size(); ++t)
            body << series.dates[t].to_string() << ',' << detail::format_double(series.closes[t])
                 << '\n';
        detail::write_file_atomic(std::filesystem::path(config.out) / (series.symbol + ".csv"),
                                  body.str());
    }
    detail::write_config_json(config);
}

/// Full pipeline: classify every symbol on its first half, trade both
/// strategies on its second half, and report per-symbol rows, summary
/// statistics (all-momentum, all-mean-reversion, Hurst-gated), histograms,
/// and the skipped symbols.
inline void cmd_pipeline(const RunConfig& config) {
    std::vector<SkippedSymbol> skipped;
    const auto universe = detail::load_universe(config.universe, skipped);

    UniverseConfig uc{config.split_date, config.short_window, config.long_window,
                      config.band_window, config.band_k, config.threads};
    UniverseResult result = run_universe(universe, uc);
    skipped.insert(skipped.end(), result.skipped.begin(), result.skipped.end());
    const auto& rows = result.rows;

    std::vector<double> r_mom, r_mr, r_gated;
    std::size_t zero_mom = 0, zero_mr = 0, zero_gated = 0;
    for (const SymbolRow& row : rows) {
        r_mom.push_back(row.r_momentum);
        r_mr.push_back(row.r_meanrev);
        r_gated.push_back(gated_return(row, config.boundary));
        const bool routed_meanrev = row.h <= config.boundary;
        zero_mom += row.trades_momentum == 0;
        zero_mr += row.trades_meanrev == 0;
        zero_gated += (routed_meanrev ? row.trades_meanrev : row.trades_momentum) == 0;
    }

    std::filesystem::create_directories(config.out);
    const std::filesystem::path out(config.out);

    std::string rows_csv = "symbol,h,r_momentum,r_meanrev\n";
    for (const SymbolRow& row : rows) {
        rows_csv += detail::csv_quote(row.symbol) + ',' + detail::format_double(row.h) + ',' +
                    detail::format_double(row.r_momentum) + ',' +
                    detail::format_double(row.r_meanrev) + '\n';
    }
    detail::write_file_atomic(out / "rows.csv", rows_csv);
    detail::write_skipped_csv(out / "skipped.csv", skipped);

    detail::write_file_atomic(out / "hist_momentum.csv",
                              detail::histogram_csv(histogram(r_mom, config.hist_bins)));
    detail::write_file_atomic(out / "hist_meanrev.csv",
                              detail::histogram_csv(histogram(r_mr, config.hist_bins)));
    detail::write_file_atomic(out / "hist_gated.csv",
                              detail::histogram_csv(histogram(r_gated, config.hist_bins)));

    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = config_json(config);
    j["universe"] = {{"rows", rows.size()}, {"skipped", skipped.size()}};
    auto block = [](const SummaryStats& s, std::size_t zero_trades) {
        nlohmann::json b = detail::stats_json(s);
        b["zero_trade_symbols"] = zero_trades;
        return b;
    };
    j["momentum"] = block(summary(r_mom), zero_mom);
    j["meanrev"] = block(summary(r_mr), zero_mr);
    j["gated"] = block(summary(r_gated), zero_gated);
    j["gated"]["boundary"] = config.boundary;
    detail::write_json_atomic(out / "summary.json", j);
    detail::write_config_json(config);
}

/// Sweep the gating boundary over a uniform grid and tabulate the summary
/// statistics of gated returns at each point.
inline void cmd_sweep(const RunConfig& config) {
    std::vector<SkippedSymbol> skipped;
    const auto universe = detail::load_universe(config.universe, skipped);

    UniverseConfig uc{config.split_date, config.short_window, config.long_window,
                      config.band_window, config.band_k, config.threads};
    UniverseResult result = run_universe(universe, uc);
    skipped.insert(skipped.end(), result.skipped.begin(), result.skipped.end());

    const std::vector<double> grid = default_grid(config.grid_step);
    const std::vector<SweepPoint> points = sweep(result.rows, grid, config.threads);

    std::filesystem::create_directories(config.out);
    std::string csv = "boundary,mean,median,std,n\n";
    for (const SweepPoint& p : points) {
        csv += detail::format_double(p.boundary) + ',' + detail::format_double(p.stats.mean) +
               ',' + detail::format_double(p.stats.median) + ',' +
               detail::format_double(p.stats.std) + ',' + std::to_string(p.stats.n) + '\n';
    }
    detail::write_file_atomic(std::filesystem::path(config.out) / "sweep.csv", csv);
    detail::write_skipped_csv(std::filesystem::path(config.out) / "skipped.csv", skipped);
    detail::write_config_json(config);
}

/// Train the Q-learning agent on all universe data strictly before the split
/// date and serialize the table to <out>/qtable.json.
inline void cmd_qtrain(const RunConfig& config) {
    std::vector<SkippedSymbol> skipped;
    const auto universe = detail::load_universe(config.universe, skipped);

    StateSpec spec{config.short_window, config.long_window, config.bins_per_dim, {}};
    Hyperparams params{config.alpha,      config.gamma, config.epsilon, config.both_action,
                       config.t_threshold, config.n_min, config.seed};

    std::vector<PriceSeries> training;
    for (const PriceSeries& series : universe) {
        PriceSeries head = detail::take_before(series, config.split_date);
        if (head.size() < config.long_window + 2) {
            skipped.push_back({series.symbol, "too short before split date"});
            continue;
        }
        training.push_back(std::move(head));
    }
    if (training.empty())
        throw std::runtime_error("qtrain: no usable training data before " +
                                 config.split_date.to_string());

    const QTable table = train(training, spec, params);

    std::filesystem::create_directories(config.out);
    nlohmann::json j = to_json(table);
    j["config"] = config_json(config);
    j["skipped"] = skipped.size();
    detail::write_json_atomic(std::filesystem::path(config.out) / "qtable.json", j);
    detail::write_skipped_csv(std::filesystem::path(config.out) / "skipped.csv", skipped);
    detail::write_config_json(config);
}

/// Evaluate a trained table on universe data from the split date on, in the
/// restricted and/or forced mode. Errors if the evaluation window overlaps
/// the table's recorded training dates.
inline void cmd_qeval(const RunConfig& config) {
    const std::filesystem::path table_path =
        config.qtable.empty() ? std::filesystem::path(config.out) / "qtable.json"
                              : std::filesystem::path(config.qtable);
    if (!std::filesystem::exists(table_path))
        throw std::runtime_error("qeval: qtable not found: " + table_path.string());
    std::ifstream in(table_path);
    nlohmann::json table_json = nlohmann::json::parse(in);
    const QTable table = qtable_from_json(table_json);

    std::vector<SkippedSymbol> skipped;
    const auto universe = detail::load_universe(config.universe, skipped);

    std::vector<PriceSeries> eval_set;
    for (const PriceSeries& series : universe) {
        PriceSeries tail = detail::take_from(series, config.split_date);
        if (tail.size() < table.spec.long_window + 2) {
            skipped.push_back({series.symbol, "too short from split date"});
            continue;
        }
        eval_set.push_back(std::move(tail));
    }
    if (eval_set.empty())
        throw std::runtime_error("qeval: no usable evaluation data from " +
                                 config.split_date.to_string());

    if (!table.train_date_max.empty()) {
        const Date train_min = Date::parse(table.train_date_min);
        const Date train_max = Date::parse(table.train_date_max);
        Date eval_min = eval_set.front().dates.front();
        Date eval_max = eval_set.front().dates.back();
        for (const auto& s : eval_set) {
            eval_min = std::min(eval_min, s.dates.front());
            eval_max = std::max(eval_max, s.dates.back());
        }
        if (eval_min <= train_max && train_min <= eval_max)
            throw std::runtime_error("qeval: evaluation window " + eval_min.to_string() + ".." +
                                     eval_max.to_string() + " overlaps training window " +
                                     table.train_date_min + ".." + table.train_date_max);
    }

    std::vector<PolicyMode> modes;
    if (config.qeval_mode == "restricted") modes = {PolicyMode::Restricted};
    else if (config.qeval_mode == "forced") modes = {PolicyMode::Forced};
    else if (config.qeval_mode == "both") modes = {PolicyMode::Restricted, PolicyMode::Forced};
    else throw std::invalid_argument("qeval: unknown mode '" + config.qeval_mode + "'");

    std::filesystem::create_directories(config.out);
    nlohmann::json j;
    j["version"] = kVersion;
    j["config"] = config_json(config);
    j["qtable"] = table_path.string();
    j["returns_file"] = "qeval_returns.csv";

    std::string returns_csv = "mode,symbol,date,return\n";
    for (PolicyMode mode : modes) {
        nlohmann::json per_symbol = nlohmann::json::array();
        std::vector<double> sharpes;
        for (const PriceSeries& series : eval_set) {
            const Evaluation eval = evaluate(table, series, mode);
            per_symbol.push_back({{"symbol", series.symbol},
                                  {"sharpe", eval.sharpe},
                                  {"degenerate", eval.degenerate},
                                  {"days", eval.daily_returns.size()},
                                  {"actions",
                                   {{"long", eval.n_long},
                                    {"short", eval.n_short},
                                    {"abstain", eval.n_abstain}}}});
            sharpes.push_back(eval.sharpe);
            for (std::size_t i = 0; i < eval.daily_returns.size(); ++i) {
                const std::size_t t = table.spec.long_window + i;
                returns_csv += std::string(to_string(mode)) + ',' +
                               detail::csv_quote(series.symbol) + ',' +
                               series.dates[t + 1].to_string() + ',' +
                               detail::format_double(eval.daily_returns[i]) + '\n';
            }
        }
        j[to_string(mode)] = {{"symbols", std::move(per_symbol)},
                              {"sharpe_summary", detail::stats_json(summary(sharpes))}};
    }
    detail::write_file_atomic(std::filesystem::path(config.out) / "qeval_returns.csv",
                              returns_csv);
    detail::write_skipped_csv(std::filesystem::path(config.out) / "skipped.csv", skipped);
    detail::write_json_atomic(std::filesystem::path(config.out) / "qeval.json", j);
    detail::write_config_json(config);
}

}  // namespace hurstlab
