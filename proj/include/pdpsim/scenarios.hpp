#pragma once

#include <functional>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

namespace pdpsim {

struct ScenarioContext {
    std::optional<uint64_t> seed;  // overrides the scenario's built-in seed
    int threads = 0;
    std::string out_dir = "out";
};

struct ScenarioOutcome {
    std::string name;
    int criterion = 0;
    std::string gate;  // the pass condition, spelled out
    bool passed = false;
    nlohmann::json metrics;
    double wall_seconds = 0.0;
};

struct Scenario {
    std::string name;
    int criterion;
    std::string description;
    std::function<ScenarioOutcome(const ScenarioContext&)> run;
};

/// Built-in named scenarios, one per acceptance gate, in criterion order.
const std::vector<Scenario>& scenario_registry();
const Scenario* find_scenario(const std::string& name);

}  // namespace pdpsim
