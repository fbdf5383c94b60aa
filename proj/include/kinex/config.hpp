#pragma once

// Run configuration shared by the CLI subcommands. The file is JSON; every
// key is optional and unknown keys are rejected.
//
//   {
//     "simulation": { "n_agents": 1000, "saving_rate": 0.25, "surplus_rate": 0.5,
//                     "initial_asset": 1.0, "t_max": 100000, "seed": 0,
//                     "snapshot_times": [0, 1000, 10000, 100000],
//                     "tau_t1": 99000, "series_times": [...], "histogram_bins": 50 },
//     "sweep":      { "lambda_values": [...], "gamma_values": [...], "n_agents": 1000,
//                     "initial_asset": 1.0, "t_max": 100000, "t1": 99000, "t2": 100000,
//                     "replicates": 5, "base_seed": 0 },
//     "empirical":  { "thresholds": [200, 450] },
//     "output":     { "dir": "kinex_out", "format": "csv" }
//   }

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "kinex/empirical.hpp"
#include "kinex/exchange.hpp"
#include "kinex/sweep.hpp"
#include "kinex/table.hpp"

namespace kinex {

/// Invalid or inconsistent configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimulateConfig {
    SimulationParams params;                    // empty snapshot_times -> default schedule
    std::optional<std::uint64_t> tau_t1;        // default round(0.99 * t_max)
    std::vector<std::uint64_t> series_times;    // empty -> 0 plus 100 even steps
    std::size_t histogram_bins = 50;
};

struct SweepConfig {
    SweepSpec spec;                             // empty grids -> defaults
    std::optional<std::uint64_t> t1;            // default round(0.99 * t_max)
    std::optional<std::uint64_t> t2;            // default t_max
};

struct EmpiricalConfig {
    std::optional<GroupThresholds> thresholds;  // default: 33rd/67th percentiles of f
};

struct OutputConfig {
    std::string dir = "kinex_out";
    TableFormat format = TableFormat::csv;
};

struct Config {
    SimulateConfig simulation;
    SweepConfig sweep;
    EmpiricalConfig empirical;
    OutputConfig output;
};

/// Default gamma grid for sweeps: {0, 0.1, 0.25, 0.5, 0.75, 1}.
std::vector<double> default_gamma_grid();

/// Throws ConfigError on unknown keys or wrongly typed values.
Config parse_config(const nlohmann::json& doc);

/// Reads and parses a config file; throws ConfigError if unreadable.
Config load_config(const std::string& path);

/// Fills every defaulted field that depends on other values, then validates.
void resolve_simulate(SimulateConfig& c);
void resolve_sweep(SweepConfig& c);

/// Fully-resolved echo of `c` (call after resolving).
nlohmann::ordered_json to_json(const Config& c);

}  // namespace kinex
