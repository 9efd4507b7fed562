#pragma once

// Run configuration: seed, caps, tolerances. Loadable from a flat JSON file;
// command-line flags override file values.

#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace derivlab {

struct RunConfig {
    std::uint64_t seed = 20250809;
    int support_cap = 16;
    double dual_tolerance = 1e-6;
    int trials = 10000;
    std::string output_format = "csv";  // csv | json

    void validate() const {
        if (support_cap < 1) throw std::invalid_argument("config: support_cap must be positive");
        if (trials < 1) throw std::invalid_argument("config: trials must be positive");
        if (!(dual_tolerance > 0.0)) throw std::invalid_argument("config: dual_tolerance must be positive");
        if (output_format != "csv" && output_format != "json")
            throw std::invalid_argument("config: output_format must be 'csv' or 'json'");
    }
};

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config file not found: " + path);
    nlohmann::json j;
    in >> j;
    RunConfig cfg;
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("support_cap")) cfg.support_cap = j.at("support_cap").get<int>();
    if (j.contains("dual_tolerance")) cfg.dual_tolerance = j.at("dual_tolerance").get<double>();
    if (j.contains("trials")) cfg.trials = j.at("trials").get<int>();
    if (j.contains("output_format")) cfg.output_format = j.at("output_format").get<std::string>();
    cfg.validate();
    return cfg;
}

} // namespace derivlab
