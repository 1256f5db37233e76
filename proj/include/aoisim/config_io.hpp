#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoisim/model.hpp"

namespace aoisim {

// Malformed config file; the message carries the line and field.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` file with '#' comments; list values are comma-separated.
struct ConfigFile {
    std::map<std::string, std::string> values;
    std::map<std::string, int> lines; // 1-based line of each key

    static ConfigFile load(const std::string& path);
    static ConfigFile parse(const std::string& text, const std::string& origin);

    bool has(const std::string& key) const { return values.count(key) > 0; }
    std::string where(const std::string& key) const;
};

// Sweep description: arrival rates are multiplier_i * lambda for each swept
// lambda value. Horizon/replications of 0 mean "use the defaults".
struct ExperimentSpec {
    NetworkConfig base; // arrival_rate filled per sweep point
    std::vector<double> lambda_multiplier;
    std::vector<double> lambda_values;
    std::vector<QueueDiscipline> disciplines;
    std::vector<std::string> policies; // optimal-randomized | max-weight | naive
    std::int64_t horizon = 0;
    int replications = 0;
    std::string output;

    NetworkConfig config_at(double lambda) const;
};

// Extract a complete network instance (requires arrival_rate).
NetworkConfig network_config_from(const ConfigFile& file);

// Extract a sweep description (requires lambda_multiplier and lambda_values).
ExperimentSpec experiment_spec_from(const ConfigFile& file);

} // namespace aoisim
