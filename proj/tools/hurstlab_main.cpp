// hurstlab command-line driver: regime-gated strategy pipeline, boundary
// sweep, Q-learning training/evaluation, and synthetic universe generation.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "hurstlab/cli.hpp"
#include "hurstlab/version.hpp"

namespace {

std::string split_date_text;  // set only when --split-date is passed
std::string config_file;      // applied before flag values, so flags win

void add_common_flags(CLI::App* cmd, hurstlab::RunConfig& config) {
    cmd->add_option("--out", config.out, "Output directory")->capture_default_str();
    cmd->add_option("--seed", config.seed, "Master seed")->capture_default_str();
    cmd->add_option("--threads", config.threads, "Worker threads (0 = hardware)")
        ->capture_default_str();
    cmd->add_option("--config", config_file, "Flat key=value config file (flags override)");
}

void add_universe_flags(CLI::App* cmd, hurstlab::RunConfig& config) {
    cmd->add_option("--universe", config.universe, "Directory of <SYMBOL>.csv files");
    cmd->add_option("--split-date", split_date_text,
                    "First date of the second half (ISO-8601, default 2021-07-01)");
}

void add_strategy_flags(CLI::App* cmd, hurstlab::RunConfig& config) {
    cmd->add_option("--short-window", config.short_window, "Short moving-average window")
        ->capture_default_str();
    cmd->add_option("--long-window", config.long_window, "Long moving-average window")
        ->capture_default_str();
    cmd->add_option("--band-window", config.band_window, "Bollinger window")
        ->capture_default_str();
    cmd->add_option("--band-k", config.band_k, "Bollinger band width in stds")
        ->capture_default_str();
}

void add_qlearn_flags(CLI::App* cmd, hurstlab::RunConfig& config) {
    cmd->add_option("--short-window", config.short_window, "Short moving-average window")
        ->capture_default_str();
    cmd->add_option("--long-window", config.long_window, "Long moving-average window")
        ->capture_default_str();
    cmd->add_option("--bins-per-dim", config.bins_per_dim, "Quantile bins per state dimension")
        ->capture_default_str();
    cmd->add_option("--alpha", config.alpha, "Step size in (0,1]; 0 = harmonic 1/(n+1)")
        ->capture_default_str();
    cmd->add_option("--gamma", config.gamma, "Discount factor")->capture_default_str();
    cmd->add_option("--epsilon", config.epsilon, "Exploration rate (single-action mode)")
        ->capture_default_str();
    cmd->add_flag("--single-action{false}", config.both_action,
                  "Epsilon-greedy single-action updates instead of both-action");
    cmd->add_option("--t-threshold", config.t_threshold, "Restricted-policy t threshold")
        ->capture_default_str();
    cmd->add_option("--n-min", config.n_min, "Restricted-policy minimum cell count")
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hurstlab: Hurst-gated momentum / mean-reversion backtests"};
    app.set_version_flag("--version", std::string("hurstlab ") + hurstlab::kVersion);
    app.require_subcommand(1);

    hurstlab::RunConfig config;

    // config-file values must sit between defaults and flags, so the file is
    // applied before CLI11 writes the flag values
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                hurstlab::apply_config_file(config, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "hurstlab: " << e.what() << "\n";
                return 1;
            }
        }
    }

    auto* synth = app.add_subcommand("synth", "Generate a synthetic universe of CSV files");
    add_common_flags(synth, config);
    synth->add_option("--kind", config.synth_kind, "randomwalk | ou | persistent")
        ->capture_default_str();
    synth->add_option("--count", config.synth_count, "Number of symbols")->capture_default_str();
    synth->add_option("--n", config.synth_n, "Observations per symbol")->capture_default_str();
    synth->add_option("--sigma", config.synth_sigma, "Daily log-price noise")
        ->capture_default_str();
    synth->add_option("--theta", config.synth_theta, "OU mean-reversion speed")
        ->capture_default_str();
    synth->add_option("--mu", config.synth_mu, "OU long-run log-price mean")
        ->capture_default_str();
    synth->add_option("--x0", config.synth_x0, "OU initial log-price")->capture_default_str();
    synth->add_option("--phi", config.synth_phi, "AR(1) increment persistence")
        ->capture_default_str();
    synth->add_option("--p0", config.synth_p0, "Initial price")->capture_default_str();

    auto* pipeline = app.add_subcommand(
        "pipeline", "Classify on the first half, trade both strategies on the second");
    add_common_flags(pipeline, config);
    add_universe_flags(pipeline, config);
    add_strategy_flags(pipeline, config);
    pipeline->add_option("--boundary", config.boundary, "Hurst gating boundary")
        ->capture_default_str();
    pipeline->add_option("--hist-bins", config.hist_bins, "Histogram bin count")
        ->capture_default_str();

    auto* sweep = app.add_subcommand("sweep", "Sweep the gating boundary over [0,1]");
    add_common_flags(sweep, config);
    add_universe_flags(sweep, config);
    add_strategy_flags(sweep, config);
    sweep->add_option("--grid-step", config.grid_step, "Boundary grid step")
        ->capture_default_str();

    auto* qtrain = app.add_subcommand("qtrain", "Train the Q-learning agent before the split");
    add_common_flags(qtrain, config);
    add_universe_flags(qtrain, config);
    add_qlearn_flags(qtrain, config);

    auto* qeval = app.add_subcommand("qeval", "Evaluate a trained table from the split on");
    add_common_flags(qeval, config);
    add_universe_flags(qeval, config);
    qeval->add_option("--qtable", config.qtable, "Trained table (default <out>/qtable.json)");
    qeval->add_option("--mode", config.qeval_mode, "restricted | forced | both")
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (!split_date_text.empty())
            config.split_date = hurstlab::Date::parse(split_date_text);
        if (synth->parsed()) hurstlab::cmd_synth(config);
        if (pipeline->parsed()) hurstlab::cmd_pipeline(config);
        if (sweep->parsed()) hurstlab::cmd_sweep(config);
        if (qtrain->parsed()) hurstlab::cmd_qtrain(config);
        if (qeval->parsed()) hurstlab::cmd_qeval(config);
    } catch (const std::exception& e) {
        std::cerr << "hurstlab: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
