#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "arqsec/harness/result_table.hpp"

namespace arqsec::harness {

struct ExperimentConfig {
    std::string name;
    nlohmann::json overrides = nlohmann::json::object();
    std::optional<nlohmann::json> channel;  // channel config block, wifi-session / rfid-run
    std::optional<std::uint64_t> trials;    // experiment default when unset
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

const std::vector<std::string>& experiment_names();

/// Reads {"experiment", "params", "channel", "seed", "trials"}; absent keys
/// keep the values already in `base`.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j, ExperimentConfig base = {});

/// Throws ConfigError for unknown names, unknown override keys or bad values.
ResultTable run_experiment(const ExperimentConfig& cfg);

}  // namespace arqsec::harness
