#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "hurstlab/qlearn.hpp"
#include "hurstlab/version.hpp"

namespace hurstlab {

/// JSON document for a trained QTable: state spec, hyperparameters, and one
/// record per visited cell. `m2` is stored alongside the derived variance so
/// the round trip is lossless at full precision.
inline nlohmann::json to_json(const QTable& table) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["spec"] = {{"short_window", table.spec.short_window},
                 {"long_window", table.spec.long_window},
                 {"bins_per_dim", table.spec.bins_per_dim},
                 {"edges", table.spec.edges},
                 {"collapsed", table.spec.collapsed()}};
    j["params"] = {{"alpha", table.params.alpha},
                   {"gamma", table.params.gamma},
                   {"epsilon", table.params.epsilon},
                   {"both_action", table.params.both_action},
                   {"t_threshold", table.params.t_threshold},
                   {"n_min", table.params.n_min},
                   {"seed", table.params.seed}};
    j["total_steps"] = table.total_steps;
    j["train_date_min"] = table.train_date_min;
    j["train_date_max"] = table.train_date_max;

    nlohmann::json cells = nlohmann::json::array();
    const std::size_t bins = table.spec.effective_bins();
    for (std::size_t now = 0; now < bins; ++now) {
        for (std::size_t prev = 0; prev < bins; ++prev) {
            const StateId s{static_cast<std::uint32_t>(now), static_cast<std::uint32_t>(prev)};
            for (TradeAction a : {TradeAction::Long, TradeAction::Short}) {
                const QCell& cell = table.cell(s, a);
                if (cell.n == 0) continue;
                cells.push_back({{"state", {now, prev}},
                                 {"action", to_string(a)},
                                 {"q", cell.q},
                                 {"n", cell.n},
                                 {"mean", cell.mean},
                                 {"variance", cell.variance()},
                                 {"m2", cell.m2}});
            }
        }
    }
    j["cells"] = std::move(cells);
    return j;
}

inline QTable qtable_from_json(const nlohmann::json& j) {
    QTable table;
    const auto& spec = j.at("spec");
    table.spec.short_window = spec.at("short_window").get<std::size_t>();
    table.spec.long_window = spec.at("long_window").get<std::size_t>();
    table.spec.bins_per_dim = spec.at("bins_per_dim").get<std::size_t>();
    table.spec.edges = spec.at("edges").get<std::vector<double>>();

    const auto& params = j.at("params");
    table.params.alpha = params.at("alpha").get<double>();
    table.params.gamma = params.at("gamma").get<double>();
    table.params.epsilon = params.at("epsilon").get<double>();
    table.params.both_action = params.at("both_action").get<bool>();
    table.params.t_threshold = params.at("t_threshold").get<double>();
    table.params.n_min = params.at("n_min").get<std::uint64_t>();
    table.params.seed = params.at("seed").get<std::uint64_t>();

    table.total_steps = j.at("total_steps").get<std::uint64_t>();
    table.train_date_min = j.value("train_date_min", std::string{});
    table.train_date_max = j.value("train_date_max", std::string{});

    table.cells.assign(table.spec.state_count(), {});
    for (const auto& c : j.at("cells")) {
        const auto state = c.at("state").get<std::vector<std::uint32_t>>();
        if (state.size() != 2 || state[0] >= table.spec.effective_bins() ||
            state[1] >= table.spec.effective_bins())
            throw std::runtime_error("qtable_from_json: cell state out of range");
        const std::string action = c.at("action").get<std::string>();
        if (action != "long" && action != "short")
            throw std::runtime_error("qtable_from_json: unknown action '" + action + "'");
        QCell cell;
        cell.q = c.at("q").get<double>();
        cell.n = c.at("n").get<std::uint64_t>();
        cell.mean = c.at("mean").get<double>();
        cell.m2 = c.contains("m2") ? c.at("m2").get<double>()
                                   : c.at("variance").get<double>() *
                                         static_cast<double>(cell.n >= 2 ? cell.n - 1 : 0);
        table.cells[table.index_of(StateId{state[0], state[1]})]
                   [action == "long" ? 0 : 1] = cell;
    }
    return table;
}

}  // namespace hurstlab
