#include "kinex/exchange.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "kinex/error.hpp"

namespace kinex {

namespace {

bool in_unit_interval(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

void SimulationParams::validate() const {
    if (n_agents < 2) throw ArgumentError("n_agents must be at least 2");
    if (!in_unit_interval(saving_rate))
        throw ArgumentError("saving_rate must lie in [0, 1], got " + std::to_string(saving_rate));
    if (!in_unit_interval(surplus_rate))
        throw ArgumentError("surplus_rate must lie in [0, 1], got " + std::to_string(surplus_rate));
    if (!(initial_asset > 0.0) || !std::isfinite(initial_asset))
        throw ArgumentError("initial_asset must be positive and finite");
    if (t_max == 0) throw ArgumentError("t_max must be positive");
    for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
        if (snapshot_times[k] > t_max)
            throw ArgumentError("snapshot time " + std::to_string(snapshot_times[k]) +
                                " exceeds t_max");
        if (k > 0 && snapshot_times[k] <= snapshot_times[k - 1])
            throw ArgumentError("snapshot_times must be strictly ascending");
    }
}

double Population::total() const { return std::accumulate(assets.begin(), assets.end(), 0.0); }

const Population& RunResult::at(std::uint64_t t) const {
    auto it = snapshots.find(t);
    if (it == snapshots.end())
        throw ArgumentError("no snapshot recorded at t = " + std::to_string(t));
    return it->second;
}

StepOutcome exchange_step(double m_i, double m_j, double saving_rate, double surplus_rate,
                          double epsilon) {
    if (!std::isfinite(m_i) || !std::isfinite(m_j) || m_i < 0.0 || m_j < 0.0)
        throw ArgumentError("exchange_step: assets must be finite and non-negative");
    if (!in_unit_interval(saving_rate) || !in_unit_interval(surplus_rate) ||
        !in_unit_interval(epsilon))
        throw ArgumentError("exchange_step: rates and epsilon must lie in [0, 1]");

    const double stake_frac = 1.0 - saving_rate;
    const double m_p = std::min(m_i, m_j);
    const double m_r = std::max(m_i, m_j);
    const double poor_stake = stake_frac * m_p;
    const double rich_stake = stake_frac * (m_p + surplus_rate * (m_r - m_p));

    // Retained parts are clamped at zero so rounding can never push an agent
    // negative; the stakes are then re-derived so the pair sum is preserved.
    const bool i_poorer = m_i <= m_j;
    const double kept_i = std::max(0.0, m_i - (i_poorer ? poor_stake : rich_stake));
    const double kept_j = std::max(0.0, m_j - (i_poorer ? rich_stake : poor_stake));
    const double pool = (m_i - kept_i) + (m_j - kept_j);
    const double share_i = epsilon * pool;

    StepOutcome out;
    out.epsilon = epsilon;
    out.pool = pool;
    out.new_mi = kept_i + share_i;
    out.new_mj = kept_j + (pool - share_i);
    return out;
}

std::pair<std::size_t, std::size_t> sample_pair(Rng& rng, std::size_t n_agents) {
    if (n_agents < 2) throw ArgumentError("sample_pair: need at least 2 agents");
    const auto i = static_cast<std::size_t>(rng.below(n_agents));
    auto j = static_cast<std::size_t>(rng.below(n_agents - 1));
    if (j >= i) ++j;
    return {i, j};
}

RunResult run_simulation(const SimulationParams& params) {
    params.validate();

    RunResult result;
    result.params = params;

    std::vector<double> assets(params.n_agents, params.initial_asset);
    Rng rng(params.seed);

    auto next_snap = params.snapshot_times.begin();
    const auto snap_end = params.snapshot_times.end();
    if (next_snap != snap_end && *next_snap == 0) {
        result.snapshots.emplace(0, Population{assets});
        ++next_snap;
    }

    double cumulative = 0.0;
    for (std::uint64_t t = 1; t <= params.t_max; ++t) {
        const auto [i, j] = sample_pair(rng, params.n_agents);
        const double eps = rng.uniform01();
        const StepOutcome s =
            exchange_step(assets[i], assets[j], params.saving_rate, params.surplus_rate, eps);
        assets[i] = s.new_mi;
        assets[j] = s.new_mj;
        cumulative += s.pool;

        if (next_snap != snap_end && *next_snap == t) {
            result.snapshots.emplace(t, Population{assets});
            ++next_snap;
        }
    }
    result.cumulative_pool = cumulative;
    return result;
}

}  // namespace kinex
