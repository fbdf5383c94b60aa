#pragma once

// Parameter grids over (saving rate, surplus rate) with replicate seeds.

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kinex/exchange.hpp"

namespace kinex {

struct SweepSpec {
    std::vector<double> lambda_values;
    std::vector<double> gamma_values;
    std::size_t n_agents = 1000;
    double initial_asset = 1.0;
    std::uint64_t t_max = 100000;
    std::uint64_t t1 = 99000;   // first rank-correlation snapshot
    std::uint64_t t2 = 100000;  // second snapshot; also where g is measured
    std::size_t replicates = 5;
    std::uint64_t base_seed = 0;

    void validate() const;
};

/// Default rank-correlation window for a run of length t_max:
/// t1 = round(0.99 * t_max), t2 = t_max.
std::pair<std::uint64_t, std::uint64_t> default_tau_window(std::uint64_t t_max);

/// Default saving-rate grid {0.05, 0.10, ..., 0.95}.
std::vector<double> default_lambda_grid();

struct ReplicateMetrics {
    double g = 0.0;
    double f = 0.0;
    double tau = 0.0;
};

struct SweepCell {
    double lambda = 0.0;
    double gamma = 0.0;
    double mean_g = 0.0;
    double mean_f = 0.0;
    double mean_tau = 0.0;
    double std_g = 0.0;  // population (1/R) standard deviations
    double std_f = 0.0;
    double std_tau = 0.0;
    std::size_t replicates = 0;
};

/// A replicate run failed; the message carries the cell coordinates.
class SweepError : public std::runtime_error {
public:
    SweepError(double lambda, double gamma, std::size_t replicate, const std::string& cause);

    double lambda;
    double gamma;
    std::size_t replicate;
};

/// g, f and tau from a single run, measured as in a sweep.
ReplicateMetrics measure_run(const SimulationParams& base, std::uint64_t t1, std::uint64_t t2);

/// Runs every (lambda, gamma, replicate) and aggregates per cell. Output is
/// lambda-major, then gamma, and bit-identical for any `workers` count.
std::vector<SweepCell> run_sweep(const SweepSpec& spec, std::size_t workers = 1);

/// Mean and population standard deviation, reduced in index order.
std::pair<double, double> mean_and_std(const std::vector<double>& values);

struct GiniSeries {
    double lambda = 0.0;
    double gamma = 0.0;
    std::vector<std::uint64_t> times;
    std::vector<double> g_values;
};

/// One run with snapshots at `sample_times` (replacing params.snapshot_times)
/// and the Gini index at each.
GiniSeries gini_time_series(const SimulationParams& params,
                            const std::vector<std::uint64_t>& sample_times);

}  // namespace kinex
