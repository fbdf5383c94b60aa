#include "kinex/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "kinex/error.hpp"

namespace kinex {

std::vector<double> default_gamma_grid() { return {0.0, 0.1, 0.25, 0.5, 0.75, 1.0}; }

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, _] : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* a) { return key == a; });
        if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        if constexpr (std::is_unsigned_v<T>) {
            if (!obj.at(key).is_number_unsigned())
                throw ConfigError(where + "." + key + ": expected a non-negative integer");
        }
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

template <class T>
void read_opt(const json& obj, const char* key, std::optional<T>& out, const std::string& where) {
    if (!obj.contains(key) || obj.at(key).is_null()) return;
    T v{};
    read(obj, key, v, where);
    out = v;
}

std::vector<std::uint64_t> default_snapshots(std::uint64_t t_max) {
    std::set<std::uint64_t> ts{0, t_max};
    for (std::uint64_t t = 1000; t <= t_max; t *= 10) ts.insert(t);
    return {ts.begin(), ts.end()};
}

std::vector<std::uint64_t> default_series(std::uint64_t t_max) {
    std::set<std::uint64_t> ts{0};
    for (std::uint64_t k = 1; k <= 100; ++k) ts.insert(std::max<std::uint64_t>(1, t_max * k / 100));
    return {ts.begin(), ts.end()};
}

}  // namespace

Config parse_config(const json& doc) {
    Config c;
    reject_unknown(doc, "config", {"simulation", "sweep", "empirical", "output"});

    if (doc.contains("simulation")) {
        const auto& s = doc.at("simulation");
        const std::string w = "simulation";
        reject_unknown(s, w,
                       {"n_agents", "saving_rate", "surplus_rate", "initial_asset", "t_max", "seed",
                        "snapshot_times", "tau_t1", "series_times", "histogram_bins"});
        auto& p = c.simulation.params;
        read(s, "n_agents", p.n_agents, w);
        read(s, "saving_rate", p.saving_rate, w);
        read(s, "surplus_rate", p.surplus_rate, w);
        read(s, "initial_asset", p.initial_asset, w);
        read(s, "t_max", p.t_max, w);
        read(s, "seed", p.seed, w);
        read(s, "snapshot_times", p.snapshot_times, w);
        read_opt(s, "tau_t1", c.simulation.tau_t1, w);
        read(s, "series_times", c.simulation.series_times, w);
        read(s, "histogram_bins", c.simulation.histogram_bins, w);
    }
    if (doc.contains("sweep")) {
        const auto& s = doc.at("sweep");
        const std::string w = "sweep";
        reject_unknown(s, w,
                       {"lambda_values", "gamma_values", "n_agents", "initial_asset", "t_max", "t1",
                        "t2", "replicates", "base_seed"});
        auto& sp = c.sweep.spec;
        read(s, "lambda_values", sp.lambda_values, w);
        read(s, "gamma_values", sp.gamma_values, w);
        read(s, "n_agents", sp.n_agents, w);
        read(s, "initial_asset", sp.initial_asset, w);
        read(s, "t_max", sp.t_max, w);
        read_opt(s, "t1", c.sweep.t1, w);
        read_opt(s, "t2", c.sweep.t2, w);
        read(s, "replicates", sp.replicates, w);
        read(s, "base_seed", sp.base_seed, w);
    }
    if (doc.contains("empirical")) {
        const auto& e = doc.at("empirical");
        reject_unknown(e, "empirical", {"thresholds"});
        std::optional<std::vector<double>> th;
        read_opt(e, "thresholds", th, "empirical");
        if (th) {
            if (th->size() != 2) throw ConfigError("empirical.thresholds: expected [low, high]");
            c.empirical.thresholds = GroupThresholds{(*th)[0], (*th)[1]};
        }
    }
    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        reject_unknown(o, "output", {"dir", "format"});
        read(o, "dir", c.output.dir, "output");
        std::string fmt = "csv";
        read(o, "format", fmt, "output");
        if (fmt == "csv")
            c.output.format = TableFormat::csv;
        else if (fmt == "json")
            c.output.format = TableFormat::json;
        else
            throw ConfigError("output.format: expected 'csv' or 'json', got '" + fmt + "'");
    }
    return c;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    json doc;
    try {
        doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(doc);
}

void resolve_simulate(SimulateConfig& c) {
    auto& p = c.params;
    if (p.t_max == 0) throw ConfigError("simulation.t_max must be positive");
    if (p.snapshot_times.empty()) p.snapshot_times = default_snapshots(p.t_max);
    if (c.series_times.empty()) c.series_times = default_series(p.t_max);
    if (!c.tau_t1) c.tau_t1 = default_tau_window(p.t_max).first;
    if (c.histogram_bins == 0) throw ConfigError("simulation.histogram_bins must be positive");
    if (*c.tau_t1 >= p.t_max) throw ConfigError("simulation.tau_t1 must be below t_max");
    for (std::size_t k = 1; k < c.series_times.size(); ++k)
        if (c.series_times[k] <= c.series_times[k - 1])
            throw ConfigError("simulation.series_times must be strictly ascending");
    if (!c.series_times.empty() && c.series_times.back() > p.t_max)
        throw ConfigError("simulation.series_times must not exceed t_max");
    try {
        p.validate();
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("simulation: ") + e.what());
    }
}

void resolve_sweep(SweepConfig& c) {
    auto& s = c.spec;
    if (s.t_max == 0) throw ConfigError("sweep.t_max must be positive");
    if (s.lambda_values.empty()) s.lambda_values = default_lambda_grid();
    if (s.gamma_values.empty()) s.gamma_values = default_gamma_grid();
    const auto [d1, d2] = default_tau_window(s.t_max);
    s.t1 = c.t1.value_or(d1);
    s.t2 = c.t2.value_or(d2);
    c.t1 = s.t1;
    c.t2 = s.t2;
    try {
        s.validate();
    } catch (const ArgumentError& e) {
        throw ConfigError(std::string("sweep: ") + e.what());
    }
}

nlohmann::ordered_json to_json(const Config& c) {
    nlohmann::ordered_json j;
    const auto& p = c.simulation.params;
    j["simulation"] = {
        {"n_agents", p.n_agents},
        {"saving_rate", p.saving_rate},
        {"surplus_rate", p.surplus_rate},
        {"initial_asset", p.initial_asset},
        {"t_max", p.t_max},
        {"seed", p.seed},
        {"snapshot_times", p.snapshot_times},
        {"tau_t1", c.simulation.tau_t1 ? nlohmann::ordered_json(*c.simulation.tau_t1) : nullptr},
        {"series_times", c.simulation.series_times},
        {"histogram_bins", c.simulation.histogram_bins},
    };
    const auto& s = c.sweep.spec;
    j["sweep"] = {
        {"lambda_values", s.lambda_values},
        {"gamma_values", s.gamma_values},
        {"n_agents", s.n_agents},
        {"initial_asset", s.initial_asset},
        {"t_max", s.t_max},
        {"t1", c.sweep.t1 ? nlohmann::ordered_json(*c.sweep.t1) : nullptr},
        {"t2", c.sweep.t2 ? nlohmann::ordered_json(*c.sweep.t2) : nullptr},
        {"replicates", s.replicates},
        {"base_seed", s.base_seed},
    };
    j["empirical"]["thresholds"] =
        c.empirical.thresholds
            ? nlohmann::ordered_json::array({c.empirical.thresholds->low, c.empirical.thresholds->high})
            : nlohmann::ordered_json(nullptr);
    j["output"] = {{"dir", c.output.dir},
                   {"format", c.output.format == TableFormat::csv ? "csv" : "json"}};
    return j;
}

}  // namespace kinex
