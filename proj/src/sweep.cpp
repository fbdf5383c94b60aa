#include "kinex/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <sstream>
#include <thread>

#include "kinex/error.hpp"
#include "kinex/metrics.hpp"
#include "kinex/rng.hpp"

namespace kinex {

void SweepSpec::validate() const {
    if (lambda_values.empty() || gamma_values.empty())
        throw ArgumentError("sweep grids must be non-empty");
    for (double v : lambda_values)
        if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("lambda values must lie in [0, 1]");
    for (double v : gamma_values)
        if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("gamma values must lie in [0, 1]");
    if (replicates < 1) throw ArgumentError("replicates must be at least 1");
    if (n_agents < 2) throw ArgumentError("n_agents must be at least 2");
    if (!(t1 < t2 && t2 <= t_max)) throw ArgumentError("need t1 < t2 <= t_max");
}

std::pair<std::uint64_t, std::uint64_t> default_tau_window(std::uint64_t t_max) {
    auto t1 = static_cast<std::uint64_t>(std::llround(0.99 * static_cast<double>(t_max)));
    if (t1 >= t_max) t1 = t_max - 1;
    return {t1, t_max};
}

std::vector<double> default_lambda_grid() {
    std::vector<double> grid;
    for (int k = 1; k <= 19; ++k) grid.push_back(k * 0.05);
    return grid;
}

namespace {

std::string describe(double lambda, double gamma, std::size_t replicate, const std::string& cause) {
    std::ostringstream os;
    os << "sweep cell (lambda=" << lambda << ", gamma=" << gamma << ", replicate=" << replicate
       << "): " << cause;
    return os.str();
}

}  // namespace

SweepError::SweepError(double lambda_, double gamma_, std::size_t replicate_,
                       const std::string& cause)
    : std::runtime_error(describe(lambda_, gamma_, replicate_, cause)),
      lambda(lambda_),
      gamma(gamma_),
      replicate(replicate_) {}

ReplicateMetrics measure_run(const SimulationParams& base, std::uint64_t t1, std::uint64_t t2) {
    SimulationParams p = base;
    p.snapshot_times = {t1, t2};
    const RunResult run = run_simulation(p);
    const auto& early = run.at(t1).assets;
    const auto& late = run.at(t2).assets;
    return ReplicateMetrics{gini(late), total_exchange(run.cumulative_pool, p.t_max),
                            kendall_tau(early, late)};
}

std::pair<double, double> mean_and_std(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    const double n = static_cast<double>(values.size());
    double sum = 0.0;
    for (double v : values) sum += v;
    const double mean = sum / n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / n)};
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec, std::size_t workers) {
    spec.validate();
    const std::size_t n_lambda = spec.lambda_values.size();
    const std::size_t n_gamma = spec.gamma_values.size();
    const std::size_t reps = spec.replicates;
    const std::size_t n_jobs = n_lambda * n_gamma * reps;

    // Job k = ((li * n_gamma) + gi) * reps + r; every job owns its own slot.
    std::vector<ReplicateMetrics> results(n_jobs);
    std::vector<std::exception_ptr> errors(n_jobs);

    auto run_job = [&](std::size_t k) {
        const std::size_t r = k % reps;
        const std::size_t gi = (k / reps) % n_gamma;
        const std::size_t li = k / (reps * n_gamma);
        SimulationParams p;
        p.n_agents = spec.n_agents;
        p.saving_rate = spec.lambda_values[li];
        p.surplus_rate = spec.gamma_values[gi];
        p.initial_asset = spec.initial_asset;
        p.t_max = spec.t_max;
        p.seed = derive_seed(spec.base_seed, li, gi, r);
        try {
            results[k] = measure_run(p, spec.t1, spec.t2);
        } catch (const std::exception& e) {
            errors[k] = std::make_exception_ptr(
                SweepError(p.saving_rate, p.surplus_rate, r, e.what()));
        }
    };

    workers = std::max<std::size_t>(1, std::min(workers, n_jobs));
    if (workers == 1) {
        for (std::size_t k = 0; k < n_jobs; ++k) run_job(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t k = next++; k < n_jobs; k = next++) run_job(k);
            });
        }
    }

    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    std::vector<SweepCell> cells;
    cells.reserve(n_lambda * n_gamma);
    std::vector<double> gs(reps), fs(reps), taus(reps);
    for (std::size_t li = 0; li < n_lambda; ++li) {
        for (std::size_t gi = 0; gi < n_gamma; ++gi) {
            for (std::size_t r = 0; r < reps; ++r) {
                const auto& m = results[(li * n_gamma + gi) * reps + r];
                gs[r] = m.g;
                fs[r] = m.f;
                taus[r] = m.tau;
            }
            SweepCell c;
            c.lambda = spec.lambda_values[li];
            c.gamma = spec.gamma_values[gi];
            std::tie(c.mean_g, c.std_g) = mean_and_std(gs);
            std::tie(c.mean_f, c.std_f) = mean_and_std(fs);
            std::tie(c.mean_tau, c.std_tau) = mean_and_std(taus);
            c.replicates = reps;
            cells.push_back(c);
        }
    }
    return cells;
}

GiniSeries gini_time_series(const SimulationParams& params,
                            const std::vector<std::uint64_t>& sample_times) {
    SimulationParams p = params;
    p.snapshot_times = sample_times;
    const RunResult run = run_simulation(p);

    GiniSeries series;
    series.lambda = p.saving_rate;
    series.gamma = p.surplus_rate;
    series.times = sample_times;
    series.g_values.reserve(sample_times.size());
    for (std::uint64_t t : sample_times) series.g_values.push_back(gini(run.at(t).assets));
    return series;
}

}  // namespace kinex
