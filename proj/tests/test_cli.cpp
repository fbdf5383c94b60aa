#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kinex/cli.hpp"
#include "kinex/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("kinex_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = kinex::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

// Data rows of a kinex CSV table (schema line and header skipped).
std::vector<std::vector<std::string>> rows_of(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# kinex-schema v1");
    std::getline(in, line);
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        rows.push_back(f);
    }
    return rows;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
    CHECK(run({}).code == 2);
    CHECK(run({"bogus"}).code == 2);
    CHECK(run({"fit"}).code == 2);  // --table is required
    CHECK(run({"simulate", "--seed", "abc"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("config parsing") {
    CHECK_THROWS_AS(kinex::parse_config(json::parse(R"({"simulation": {"nagents": 5}})")),
                    kinex::ConfigError);
    CHECK_THROWS_AS(kinex::parse_config(json::parse(R"({"extra": 1})")), kinex::ConfigError);
    CHECK_THROWS_AS(kinex::parse_config(json::parse(R"({"simulation": {"t_max": -3}})")),
                    kinex::ConfigError);
    CHECK_THROWS_AS(kinex::parse_config(json::parse(R"({"output": {"format": "xml"}})")),
                    kinex::ConfigError);
    CHECK_THROWS_AS(kinex::parse_config(json::parse(R"({"empirical": {"thresholds": [1]}})")),
                    kinex::ConfigError);

    auto c = kinex::parse_config(json::parse(R"({"simulation": {"t_max": 5000}})"));
    kinex::resolve_simulate(c.simulation);
    CHECK(c.simulation.params.snapshot_times == std::vector<std::uint64_t>{0, 1000, 5000});
    CHECK(*c.simulation.tau_t1 == 4950);
    CHECK(c.simulation.series_times.front() == 0);
    CHECK(c.simulation.series_times.back() == 5000);

    auto s = kinex::parse_config(json::parse(R"({"sweep": {"t_max": 1000}})"));
    kinex::resolve_sweep(s.sweep);
    CHECK(s.sweep.spec.t1 == 990);
    CHECK(s.sweep.spec.t2 == 1000);
    CHECK(s.sweep.spec.lambda_values.size() == 19);
    CHECK(s.sweep.spec.gamma_values == kinex::default_gamma_grid());

    // the resolved echo parses back to the same settings
    const auto echoed = kinex::parse_config(json::parse(kinex::to_json(s).dump()));
    CHECK(echoed.sweep.spec.lambda_values == s.sweep.spec.lambda_values);
    CHECK(*echoed.sweep.t1 == 990);
}

TEST_CASE("simulate with defaults") {
    const auto dir = scratch("sim_default");
    const auto r = run({"simulate", "--out", dir.string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"config.resolved.json", "simulate_summary.json", "gini_series.csv",
                          "histogram_0.csv", "histogram_100000.csv", "snapshots/100000.csv",
                          "snapshots/1000.csv"})
        CHECK_MESSAGE(fs::exists(dir / f), f);

    long total = 0;
    for (const auto& row : rows_of(dir / "histogram_100000.csv")) total += std::stol(row[2]);
    CHECK(total == 1000);
    CHECK(rows_of(dir / "snapshots/100000.csv").size() == 1000);

    const auto summary = json::parse(slurp(dir / "simulate_summary.json"));
    CHECK(summary["total_wealth"].get<double>() == doctest::Approx(1000.0).epsilon(1e-9));
    CHECK(summary["snapshots"][0]["gamma_fit"].is_null());  // t = 0 is degenerate
    CHECK(summary["snapshots"].back()["gamma_fit"]["shape_k"].get<double>() > 0.0);

    const auto cfg = json::parse(slurp(dir / "config.resolved.json"));
    CHECK(cfg["simulation"]["n_agents"] == 1000);
    CHECK(cfg["simulation"]["saving_rate"] == 0.25);
    CHECK(cfg["simulation"]["tau_t1"] == 99000);
    CHECK(cfg["output"]["dir"] == dir.string());
}

TEST_CASE("simulate edge configurations") {
    const auto dir = scratch("sim_edge");
    SUBCASE("lambda = 1 reports zero flow") {
        write(dir / "c.json", R"({"simulation": {"saving_rate": 1.0, "t_max": 2000, "n_agents": 100}})");
        const auto r = run({"simulate", "--config", (dir / "c.json").string(), "--out",
                            (dir / "o").string()});
        REQUIRE(r.code == 0);
        const auto summary = json::parse(slurp(dir / "o/simulate_summary.json"));
        CHECK(summary["total_exchange"] == 0.0);
        CHECK(r.err.find("warning") != std::string::npos);  // tau undefined between frozen states
    }
    SUBCASE("KK endpoint is near-delta by 1e6") {
        write(dir / "c.json",
              R"({"simulation": {"saving_rate": 0.4, "surplus_rate": 0.0, "t_max": 1000000,
                                 "snapshot_times": [1000000], "series_times": [0, 1000000]}})");
        const auto r = run({"simulate", "--config", (dir / "c.json").string(), "--out",
                            (dir / "o").string()});
        REQUIRE(r.code == 0);
        const auto summary = json::parse(slurp(dir / "o/simulate_summary.json"));
        CHECK(summary["gini"].get<double>() >= 0.9);
    }
    SUBCASE("invalid config exits with 2") {
        write(dir / "bad.json", R"({"simulation": {"saving_rate": 2.0}})");
        CHECK(run({"simulate", "--config", (dir / "bad.json").string()}).code == 2);
        write(dir / "bad.json", R"({"simulation": {"unknown": 1}})");
        CHECK(run({"simulate", "--config", (dir / "bad.json").string()}).code == 2);
        write(dir / "bad.json", "{ not json");
        CHECK(run({"simulate", "--config", (dir / "bad.json").string()}).code == 2);
    }
    SUBCASE("json output format") {
        write(dir / "c.json", R"({"simulation": {"t_max": 1000, "n_agents": 20},
                                  "output": {"format": "json"}})");
        REQUIRE(run({"simulate", "--config", (dir / "c.json").string(), "--out",
                     (dir / "o").string()}).code == 0);
        const auto series = json::parse(slurp(dir / "o/gini_series.json"));
        CHECK(series[0]["t"] == 0);
        CHECK(series[0]["g"] == 0.0);
        CHECK(fs::exists(dir / "o/snapshots/1000.json"));
    }
}

TEST_CASE("simulate output is byte-identical for the same seed") {
    const auto dir = scratch("sim_det");
    write(dir / "c.json", R"({"simulation": {"t_max": 20000, "n_agents": 300, "seed": 17}})");
    for (const char* o : {"a", "b"})
        REQUIRE(run({"simulate", "--config", (dir / "c.json").string(), "--out",
                     (dir / o).string()}).code == 0);
    for (const char* f : {"simulate_summary.json", "gini_series.csv", "snapshots/20000.csv",
                          "histogram_20000.csv"})
        CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
    REQUIRE(run({"simulate", "--config", (dir / "c.json").string(), "--seed", "18", "--out",
                 (dir / "c").string()}).code == 0);
    CHECK(slurp(dir / "a/snapshots/20000.csv") != slurp(dir / "c/snapshots/20000.csv"));
    CHECK(json::parse(slurp(dir / "c/config.resolved.json"))["simulation"]["seed"] == 18);
}

TEST_CASE("sweep subcommand") {
    const auto dir = scratch("sweep");
    write(dir / "c.json", R"({"sweep": {"lambda_values": [0.5, 1.0], "gamma_values": [0.2, 0.8],
                                        "n_agents": 100, "t_max": 5000, "replicates": 3}})");
    const auto r = run({"sweep", "--config", (dir / "c.json").string(), "--replicates", "1",
                        "--out", (dir / "o").string()});
    REQUIRE(r.code == 0);
    const auto rows = rows_of(dir / "o/sweep.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0][0] == "0.5");
    CHECK(rows[0][1] == "0.2");
    CHECK(rows[1][1] == "0.8");
    CHECK(rows[2][0] == "1");
    CHECK(rows[2][3] == "0");  // mean_f
    CHECK(rows[3][3] == "0");
    CHECK(rows[0][8] == "1");  // replicates override
    CHECK(json::parse(slurp(dir / "o/config.resolved.json"))["sweep"]["replicates"] == 1);

    write(dir / "bad.json", R"({"sweep": {"t1": 10, "t2": 5}})");
    CHECK(run({"sweep", "--config", (dir / "bad.json").string()}).code == 2);
}

TEST_CASE("sweep output does not depend on KINEX_THREADS") {
    const auto dir = scratch("sweep_threads");
    write(dir / "c.json", R"({"sweep": {"lambda_values": [0.2, 0.6], "gamma_values": [0.3, 1.0],
                                        "n_agents": 100, "t_max": 5000, "replicates": 3}})");
    ::setenv("KINEX_THREADS", "1", 1);
    CHECK(kinex::cli::worker_count() == 1);
    REQUIRE(run({"sweep", "--config", (dir / "c.json").string(), "--out", (dir / "a").string()})
                .code == 0);
    ::setenv("KINEX_THREADS", "4", 1);
    CHECK(kinex::cli::worker_count() == 4);
    REQUIRE(run({"sweep", "--config", (dir / "c.json").string(), "--out", (dir / "b").string()})
                .code == 0);
    ::unsetenv("KINEX_THREADS");
    CHECK(slurp(dir / "a/sweep.csv") == slurp(dir / "b/sweep.csv"));
}

TEST_CASE("fit subcommand") {
    const auto dir = scratch("fit");
    SUBCASE("synthetic table on the exact law") {
        std::ostringstream t;
        t << "# kinex-schema v1\nlambda,gamma,mean_g,mean_f,mean_tau\n";
        for (double lam : {0.1, 0.4, 0.7})
            for (double gam : {0.0, 0.3, 1.0}) {
                const double g = 0.4;
                const double f = gam > 0 ? g * (0.5 * std::log((1 - lam) * gam) + 2) : 0.1;
                t << lam << "," << gam << "," << g << "," << f << "," << (0.9 - f) << "\n";
            }
        write(dir / "sweep.csv", t.str());
        const auto r = run({"fit", "--table", (dir / "sweep.csv").string(), "--out",
                            (dir / "o").string()});
        REQUIRE(r.code == 0);
        const auto rep = json::parse(slurp(dir / "o/fit_report.json"));
        CHECK(rep["law5"]["slope"].get<double>() == doctest::Approx(0.5));
        CHECK(rep["law5"]["intercept"].get<double>() == doctest::Approx(2.0));
        CHECK(rep["law5"]["r_squared"].get<double>() == doctest::Approx(1.0));
        CHECK(rep["law5"]["n_points"] == 6);
        CHECK(rep["law5"]["excluded"].size() == 3);
        CHECK(rep["law5"]["sqrt_axis"]["slope"].get<double>() == doctest::Approx(1.0));
        CHECK(rep["law6"]["slope"].get<double>() == doctest::Approx(-1.0));
        CHECK(rep["law6"]["n_points"] == 9);
        CHECK(fs::exists(dir / "o/fit_report.txt"));
        CHECK(r.out.find("tau against f") != std::string::npos);
    }
    SUBCASE("too few usable points") {
        write(dir / "sweep.csv", "lambda,gamma,mean_g,mean_f,mean_tau\n0.5,0.5,0.3,0.2,0.8\n0.5,0,0.3,0.2,0.8\n");
        CHECK(run({"fit", "--table", (dir / "sweep.csv").string(), "--out", (dir / "o").string()})
                  .code == 1);
    }
    SUBCASE("unreadable table") {
        CHECK(run({"fit", "--table", (dir / "missing.csv").string()}).code == 2);
    }
}

TEST_CASE("empirical subcommand") {
    const auto dir = scratch("empirical");
    const std::string data = KINEX_SOURCE_DIR "/data/oecd_countries.csv";
    SUBCASE("shipped table with default thresholds") {
        const auto r = run({"empirical", "--data", data, "--out", (dir / "o").string()});
        REQUIRE(r.code == 0);
        bool found = false;
        for (const auto& row : rows_of(dir / "o/derived_countries.csv"))
            if (row[0] == "Austria") {
                found = true;
                CHECK(std::abs(std::stod(row[5]) - 0.185) <= 0.001);
            }
        CHECK(found);
        const auto rep = json::parse(slurp(dir / "o/group_fits.json"));
        CHECK(rep["thresholds"]["low"].get<double>() == doctest::Approx(222.1));
        CHECK(rep["thresholds"]["high"].get<double>() == doctest::Approx(485.3));
        CHECK(rep["thresholds"]["source"] == "percentiles 33/67 of f");
        CHECK(rep["groups"].size() == 3);
        CHECK(rep["excluded"].size() == 6);
        const auto cfg = json::parse(slurp(dir / "o/config.resolved.json"));
        CHECK(cfg["empirical"]["thresholds"][0].get<double>() == doctest::Approx(222.1));
        CHECK(r.err.find("Israel") != std::string::npos);
    }
    SUBCASE("explicit thresholds") {
        const auto r = run({"empirical", "--data", data, "--thresholds", "460,700", "--out",
                            (dir / "o").string()});
        REQUIRE(r.code == 0);
        const auto rep = json::parse(slurp(dir / "o/group_fits.json"));
        CHECK(rep["thresholds"]["source"] == "user");
        CHECK(rep["groups"][0]["members"].size() == 5);
        CHECK(run({"empirical", "--data", data, "--thresholds", "700,460"}).code == 2);
        CHECK(run({"empirical", "--data", data, "--thresholds", "abc"}).code == 2);
    }
    SUBCASE("only incomplete rows") {
        write(dir / "c.csv", "country,f,g,lambda,gamma\nJapan,393,,0.28,\n");
        const auto r = run({"empirical", "--data", (dir / "c.csv").string(), "--out",
                            (dir / "o").string()});
        CHECK(r.code == 1);
        CHECK(r.err.find("no complete") != std::string::npos);
    }
    SUBCASE("parse errors carry the line number") {
        write(dir / "c.csv", "country,f,g,lambda,gamma\nA,1,0.3,0.2,0.1\nB,x,0.3,0.2,0.1\n");
        const auto r = run({"empirical", "--data", (dir / "c.csv").string(), "--out",
                            (dir / "o").string()});
        CHECK(r.code == 2);
        CHECK(r.err.find("line 3") != std::string::npos);
    }
}

TEST_CASE("installed binary exit codes") {
    const std::string bin = KINEX_BINARY;
    const auto dir = scratch("binary");
    const auto status = [&](const std::string& args) {
        const int raw = std::system((bin + " " + args + " >/dev/null 2>&1").c_str());
        return WEXITSTATUS(raw);
    };
    CHECK(status("empirical --data " KINEX_SOURCE_DIR "/data/oecd_countries.csv --out " +
                 (dir / "o").string()) == 0);
    CHECK(status("simulate --bogus") == 2);
    CHECK(status("fit --table " + (dir / "none.csv").string()) == 2);
}
