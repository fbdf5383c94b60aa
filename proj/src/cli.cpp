#include "kinex/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "kinex/config.hpp"
#include "kinex/csv.hpp"
#include "kinex/empirical.hpp"
#include "kinex/error.hpp"
#include "kinex/exchange.hpp"
#include "kinex/fitting.hpp"
#include "kinex/metrics.hpp"
#include "kinex/sweep.hpp"
#include "kinex/table.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace kinex::cli {

std::size_t worker_count() {
    if (const char* env = std::getenv("KINEX_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> replicates;
    std::string table_path;
    std::string data_path;
    std::string thresholds;
};

Config base_config(const Options& o) {
    Config c = o.config_path.empty() ? Config{} : load_config(o.config_path);
    if (!o.out_dir.empty()) c.output.dir = o.out_dir;
    return c;
}

void echo_config(const Config& c, const fs::path& dir, std::initializer_list<const char*> keep) {
    ojson full = to_json(c);
    ojson echo = ojson::object();
    for (const char* k : keep) echo[k] = full[k];
    echo["output"] = full["output"];
    write_text(dir / "config.resolved.json", echo.dump(2) + "\n");
}

ojson fit_json(const FitResult& f) {
    return {{"slope", f.slope},
            {"intercept", f.intercept},
            {"r_squared", f.r_squared},
            {"n_points", f.n_points}};
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err) {
    Config c = base_config(o);
    if (o.seed) c.simulation.params.seed = *o.seed;
    resolve_simulate(c.simulation);
    const auto& sc = c.simulation;
    const fs::path dir = c.output.dir;

    SimulationParams p = sc.params;
    std::set<std::uint64_t> times(p.snapshot_times.begin(), p.snapshot_times.end());
    times.insert(sc.series_times.begin(), sc.series_times.end());
    times.insert(*sc.tau_t1);
    times.insert(p.t_max);
    p.snapshot_times.assign(times.begin(), times.end());
    const RunResult run = run_simulation(p);

    ojson snaps = ojson::array();
    for (std::uint64_t t : sc.params.snapshot_times) {
        const auto& assets = run.at(t).assets;
        Table agents{{"agent", "asset"}, {}};
        for (std::size_t k = 0; k < assets.size(); ++k)
            agents.add_row({static_cast<std::int64_t>(k), assets[k]});
        write_table(agents, dir / "snapshots", std::to_string(t), c.output.format);

        const Histogram h = histogram(assets, sc.histogram_bins);
        Table ht{{"bin_lo", "bin_hi", "count"}, {}};
        for (std::size_t k = 0; k < h.counts.size(); ++k)
            ht.add_row({h.bin_edges[k], h.bin_edges[k + 1], static_cast<std::int64_t>(h.counts[k])});
        write_table(ht, dir, "histogram_" + std::to_string(t), c.output.format);

        std::vector<double> positive;
        for (double v : assets)
            if (v > 0.0) positive.push_back(v);
        ojson entry = {{"t", t}, {"gini", gini(assets)},
                       {"zero_assets", assets.size() - positive.size()}};
        try {
            const GammaFit gf = gamma_fit(positive);
            entry["gamma_fit"] = {{"shape_k", gf.shape_k}, {"scale_theta", gf.scale_theta}};
        } catch (const std::domain_error& e) {
            entry["gamma_fit"] = nullptr;
            entry["gamma_fit_note"] = e.what();
        } catch (const ArgumentError& e) {
            entry["gamma_fit"] = nullptr;
            entry["gamma_fit_note"] = e.what();
        }
        snaps.push_back(std::move(entry));
    }

    Table series{{"t", "g"}, {}};
    for (std::uint64_t t : sc.series_times)
        series.add_row({static_cast<std::int64_t>(t), gini(run.at(t).assets)});
    write_table(series, dir, "gini_series", c.output.format);

    const auto& early = run.at(*sc.tau_t1).assets;
    const auto& final_assets = run.at(p.t_max).assets;
    const KendallCount kc = kendall_count(early, final_assets);
    if (kc.comparable_pairs == 0)
        err << "warning: no comparable pairs between t=" << *sc.tau_t1 << " and t=" << p.t_max
            << "; tau reported as 0\n";
    const double g_final = gini(final_assets);
    const double f = total_exchange(run.cumulative_pool, p.t_max);

    ojson summary;
    summary["t_max"] = p.t_max;
    summary["gini"] = g_final;
    summary["total_exchange"] = f;
    summary["cumulative_pool"] = run.cumulative_pool;
    summary["total_wealth"] = Population{final_assets}.total();
    summary["kendall_tau"] = {{"t1", *sc.tau_t1}, {"t2", p.t_max}, {"tau", kc.tau()},
                              {"comparable_pairs", kc.comparable_pairs}};
    summary["snapshots"] = std::move(snaps);
    write_text(dir / "simulate_summary.json", summary.dump(2) + "\n");
    echo_config(c, dir, {"simulation"});

    out << "simulate: N=" << p.n_agents << " lambda=" << p.saving_rate
        << " gamma=" << p.surplus_rate << " t_max=" << p.t_max << " seed=" << p.seed << "\n"
        << "  g=" << csv::format_double(g_final) << " f=" << csv::format_double(f)
        << " tau=" << csv::format_double(kc.tau()) << "\n"
        << "  output: " << dir.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- sweep

Table sweep_table(const std::vector<SweepCell>& cells) {
    Table t{{"lambda", "gamma", "mean_g", "mean_f", "mean_tau", "std_g", "std_f", "std_tau",
             "replicates"},
            {}};
    for (const auto& c : cells)
        t.add_row({c.lambda, c.gamma, c.mean_g, c.mean_f, c.mean_tau, c.std_g, c.std_f, c.std_tau,
                   static_cast<std::int64_t>(c.replicates)});
    return t;
}

int cmd_sweep(const Options& o, std::ostream& out, std::ostream&) {
    Config c = base_config(o);
    if (o.replicates) c.sweep.spec.replicates = *o.replicates;
    resolve_sweep(c.sweep);
    const fs::path dir = c.output.dir;

    const auto cells = run_sweep(c.sweep.spec, worker_count());
    const auto path = write_table(sweep_table(cells), dir, "sweep", c.output.format);
    echo_config(c, dir, {"sweep"});

    out << "sweep: " << cells.size() << " cells x " << c.sweep.spec.replicates
        << " replicates -> " << path.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- fit

std::vector<SweepCell> read_sweep_csv(std::istream& in) {
    std::vector<SweepCell> cells;
    std::vector<std::string> header;
    std::string line;
    std::size_t lineno = 0;
    const char* required[] = {"lambda", "gamma", "mean_g", "mean_f", "mean_tau"};
    std::vector<std::size_t> idx;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto fields = csv::split_line(line);
        if (!fields) throw ParseError(lineno, "unterminated quoted field");
        if (header.empty()) {
            header = *fields;
            for (const char* r : required) {
                auto it = std::find(header.begin(), header.end(), r);
                if (it == header.end())
                    throw ParseError(lineno, std::string("sweep table lacks column '") + r + "'");
                idx.push_back(static_cast<std::size_t>(it - header.begin()));
            }
            continue;
        }
        if (fields->size() != header.size())
            throw ParseError(lineno, "field count does not match header");
        double v[5];
        for (std::size_t k = 0; k < 5; ++k) {
            auto d = csv::parse_double((*fields)[idx[k]]);
            if (!d) throw ParseError(lineno, std::string("bad number in column '") + required[k] + "'");
            v[k] = *d;
        }
        SweepCell cell;
        cell.lambda = v[0];
        cell.gamma = v[1];
        cell.mean_g = v[2];
        cell.mean_f = v[3];
        cell.mean_tau = v[4];
        cells.push_back(cell);
    }
    if (header.empty()) throw ParseError(lineno, "sweep table has no header");
    return cells;
}

std::vector<SweepCell> read_sweep_json(std::istream& in) {
    std::vector<SweepCell> cells;
    try {
        const auto doc = nlohmann::json::parse(in);
        for (const auto& row : doc) {
            SweepCell c;
            c.lambda = row.at("lambda").get<double>();
            c.gamma = row.at("gamma").get<double>();
            c.mean_g = row.at("mean_g").get<double>();
            c.mean_f = row.at("mean_f").get<double>();
            c.mean_tau = row.at("mean_tau").get<double>();
            cells.push_back(c);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, e.what());
    }
    return cells;
}

std::string describe_fit(const std::string& title, const FitResult& f) {
    std::ostringstream os;
    os << title << "\n"
       << "  slope      " << csv::format_double(f.slope) << "\n"
       << "  intercept  " << csv::format_double(f.intercept) << "\n"
       << "  R^2        " << csv::format_double(f.r_squared) << "\n"
       << "  points     " << f.n_points << "\n";
    return os.str();
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream& err) {
    Config c = base_config(o);
    const fs::path dir = c.output.dir;
    std::ifstream in(o.table_path);
    if (!in) throw ConfigError("cannot read sweep table " + o.table_path);
    const bool is_json = fs::path(o.table_path).extension() == ".json";
    const auto cells = is_json ? read_sweep_json(in) : read_sweep_csv(in);

    const LawPoints l5 = law5_points(cells);
    const LawPoints l7 = law7_points(cells);
    const auto l6 = law6_points(cells);
    if (l5.points.size() < 2 || l6.size() < 2) {
        err << "error: sweep table has fewer than 2 usable points (law 5: " << l5.points.size()
            << ", law 6: " << l6.size() << ")\n";
        return kExitRuntime;
    }
    const FitResult f5 = fit_linear(l5.points);
    const FitResult f7 = fit_linear(l7.points);
    const FitResult f6 = fit_linear(l6);

    ojson excluded = ojson::array();
    for (const auto& e : l5.excluded)
        excluded.push_back({{"lambda", e.lambda}, {"gamma", e.gamma}, {"reason", e.reason}});

    ojson report;
    report["table"] = o.table_path;
    report["law5"] = fit_json(f5);
    report["law5"]["x"] = "ln((1-lambda)*gamma)";
    report["law5"]["y"] = "mean_f/mean_g";
    report["law5"]["excluded"] = excluded;
    report["law5"]["sqrt_axis"] = fit_json(f7);
    report["law5"]["sqrt_axis"]["x"] = "ln(sqrt((1-lambda)*gamma))";
    report["law6"] = fit_json(f6);
    report["law6"]["x"] = "mean_f";
    report["law6"]["y"] = "mean_tau";
    report["law6"]["excluded"] = ojson::array();
    write_text(dir / "fit_report.json", report.dump(2) + "\n");

    std::ostringstream text;
    text << describe_fit("f/g against ln((1-lambda)*gamma)", f5)
         << "  excluded   " << l5.excluded.size() << " cell(s)\n";
    for (const auto& e : l5.excluded)
        text << "    lambda=" << csv::format_double(e.lambda)
             << " gamma=" << csv::format_double(e.gamma) << ": " << e.reason << "\n";
    text << describe_fit("f/g against ln(sqrt((1-lambda)*gamma))", f7)
         << describe_fit("tau against f", f6);
    write_text(dir / "fit_report.txt", text.str());

    ojson echo = {{"fit", {{"table", o.table_path}}}, {"output", to_json(c)["output"]}};
    write_text(dir / "config.resolved.json", echo.dump(2) + "\n");
    out << text.str();
    return kExitOk;
}

// ---------------------------------------------------------------- empirical

GroupThresholds parse_thresholds(const std::string& s) {
    const auto fields = csv::split_line(s);
    if (!fields || fields->size() != 2) throw ConfigError("--thresholds expects LO,HI");
    const auto lo = csv::parse_double((*fields)[0]);
    const auto hi = csv::parse_double((*fields)[1]);
    if (!lo || !hi) throw ConfigError("--thresholds expects two numbers");
    return {*lo, *hi};
}

int cmd_empirical(const Options& o, std::ostream& out, std::ostream& err) {
    Config c = base_config(o);
    if (!o.thresholds.empty()) c.empirical.thresholds = parse_thresholds(o.thresholds);
    if (c.empirical.thresholds && !(c.empirical.thresholds->low < c.empirical.thresholds->high))
        throw ConfigError("thresholds must satisfy LO < HI");
    const fs::path dir = c.output.dir;

    std::ifstream in(o.data_path);
    if (!in) throw ConfigError("cannot read country data " + o.data_path);
    const LoadResult loaded = load_countries(in);
    for (const auto& w : loaded.warnings) err << "warning: " << w << "\n";

    const DeriveResult derived = derive(loaded.records);
    const bool defaulted = !c.empirical.thresholds;
    const GroupThresholds th =
        c.empirical.thresholds.value_or(default_thresholds(derived.records));
    c.empirical.thresholds = th;
    const auto grouped = classify_groups(derived.records, th);
    const auto fits = fit_groups(grouped);

    Table t{{"country", "f", "g", "lambda", "gamma", "x", "f_norm", "y", "group"}, {}};
    for (const auto& d : grouped)
        t.add_row({d.record.name, d.record.f, *d.record.g, *d.record.lambda, *d.record.gamma, d.x,
                   d.f_norm, d.y, std::string(to_string(d.group))});
    write_table(t, dir, "derived_countries", c.output.format);

    ojson groups = ojson::array();
    for (const auto& gf : fits) {
        ojson g = {{"group", to_string(gf.group)}, {"members", gf.members}};
        if (gf.fit) {
            g["fit"] = fit_json(*gf.fit);
        } else {
            g["fit"] = nullptr;
            g["note"] = gf.note;
        }
        groups.push_back(std::move(g));
    }
    std::vector<XYPoint> all;
    for (const auto& d : grouped)
        if (d.x > 0.0) all.push_back({std::log(d.x), d.y});
    ojson report;
    report["data"] = o.data_path;
    report["x"] = "ln((1-lambda)*gamma)";
    report["y"] = "f_norm/g";
    report["thresholds"] = {{"low", th.low}, {"high", th.high},
                            {"source", defaulted ? "percentiles 33/67 of f" : "user"}};
    report["groups"] = std::move(groups);
    report["pooled"] = all.size() >= 2 ? fit_json(fit_linear(all)) : ojson(nullptr);
    report["excluded"] = derived.excluded;
    report["warnings"] = loaded.warnings;
    write_text(dir / "group_fits.json", report.dump(2) + "\n");
    echo_config(c, dir, {"empirical"});

    out << "empirical: " << grouped.size() << " complete records, " << derived.excluded.size()
        << " excluded; thresholds low=" << csv::format_double(th.low)
        << " high=" << csv::format_double(th.high) << (defaulted ? " (percentile default)" : "")
        << "\n";
    for (const auto& gf : fits) {
        out << "  " << to_string(gf.group) << ": " << gf.members.size() << " members";
        if (gf.fit)
            out << ", slope=" << csv::format_double(gf.fit->slope)
                << " intercept=" << csv::format_double(gf.fit->intercept)
                << " R^2=" << csv::format_double(gf.fit->r_squared);
        else
            out << ", unfittable (" << gf.note << ")";
        out << "\n";
    }
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"kinex: kinetic wealth-exchange simulator and analysis toolkit", "kinex"};
    app.require_subcommand(1);
    Options o;

    auto* sim = app.add_subcommand("simulate", "Run one simulation and write snapshots, "
                                               "histograms and the Gini series");
    sim->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    sim->add_option("--seed", o.seed, "Override simulation.seed");
    sim->add_option("--out", o.out_dir, "Output directory");

    auto* sweep = app.add_subcommand("sweep", "Run a (lambda, gamma) grid with replicates");
    sweep->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    sweep->add_option("--replicates", o.replicates, "Override sweep.replicates");
    sweep->add_option("--out", o.out_dir, "Output directory");

    auto* fit = app.add_subcommand("fit", "Fit the regression laws to a sweep table");
    fit->add_option("--table", o.table_path, "sweep.csv or sweep.json")->required();
    fit->add_option("--out", o.out_dir, "Output directory");

    auto* emp = app.add_subcommand("empirical", "Derive and fit country indicator data");
    emp->add_option("--data", o.data_path, "Country CSV (country,f,g,lambda,gamma)")->required();
    emp->add_option("--thresholds", o.thresholds, "Group thresholds LO,HI in f units");
    emp->add_option("--config", o.config_path, "JSON config file")->check(CLI::ExistingFile);
    emp->add_option("--out", o.out_dir, "Output directory");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        if (sim->parsed()) return cmd_simulate(o, out, err);
        if (sweep->parsed()) return cmd_sweep(o, out, err);
        if (fit->parsed()) return cmd_fit(o, out, err);
        if (emp->parsed()) return cmd_empirical(o, out, err);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace kinex::cli
