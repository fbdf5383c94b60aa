#pragma once

// Pairwise asset exchange with a saving rate and a surplus contribution rate
// for the richer agent, plus full seeded simulation runs.

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "kinex/rng.hpp"

namespace kinex {

struct SimulationParams {
    std::size_t n_agents = 1000;
    double saving_rate = 0.25;   // lambda: fraction of assets withheld from every exchange
    double surplus_rate = 0.5;   // gamma: fraction of the richer agent's excess put into the pool
    double initial_asset = 1.0;
    std::uint64_t t_max = 100000;  // number of pairwise exchanges
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> snapshot_times;  // strictly ascending, each <= t_max; 0 = initial state

    /// Throws ArgumentError on any violated constraint.
    void validate() const;
};

struct Population {
    std::vector<double> assets;

    double total() const;
    std::size_t size() const { return assets.size(); }
};

struct StepOutcome {
    std::size_t i = 0;
    std::size_t j = 0;
    double epsilon = 0.0;
    double pool = 0.0;  // (1-lambda) * (2*m_p + gamma*(m_r - m_p))
    double new_mi = 0.0;
    double new_mj = 0.0;
};

struct RunResult {
    std::map<std::uint64_t, Population> snapshots;
    double cumulative_pool = 0.0;
    SimulationParams params;

    /// Snapshot at time `t`; throws ArgumentError if it was not scheduled.
    const Population& at(std::uint64_t t) const;
};

/// One exchange between the agents holding `m_i` and `m_j`.
///
/// The poorer agent stakes (1-lambda)*m_p, the richer stakes
/// (1-lambda)*(m_p + gamma*(m_r - m_p)). Position i receives epsilon*pool and
/// position j the remainder. Which agent is poorer is decided from the
/// pre-exchange values, so ties give identical branches. Only the asset
/// fields of the result are filled; `i` and `j` stay zero.
StepOutcome exchange_step(double m_i, double m_j, double saving_rate, double surplus_rate,
                          double epsilon);

/// Ordered pair of distinct agent indices, uniform over the N*(N-1) choices.
/// Consumes exactly two draws from `rng` (i first, then j).
std::pair<std::size_t, std::size_t> sample_pair(Rng& rng, std::size_t n_agents);

/// Runs t_max exchanges from an equal start. Each tick draws i, j, then
/// epsilon from a single Rng seeded with `params.seed`.
RunResult run_simulation(const SimulationParams& params);

}  // namespace kinex
