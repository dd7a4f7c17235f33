#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "json.hpp"

#include "ferryline/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("ferryline_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run_tool(const std::string& args) {
    const std::string cmd =
        std::string(FERRYLINE_TOOL_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

json toy_config(const fs::path& out_dir) {
    json seg1 = {{"duration_s", 3600},
                 {"rate_per_min", 4.0},
                 {"scmc_pass_probability", 0.8},
                 {"delay",
                  {{"kind", "lognormal"}, {"log_mean", 6.0}, {"log_sigma", 1.0}}}};
    json seg2 = {{"duration_s", 3600},
                 {"rate_per_min", 1.0},
                 {"scmc_pass_probability", 0.8},
                 {"delay", {{"kind", "pareto"}, {"scale", 120.0}, {"shape", 1.5}}}};
    json blocks = json::array();
    for (double lat : {31.05, 31.12}) {
        blocks.push_back({{"center", {{"latitude", lat}, {"longitude", 121.6}}},
                          {"segments", {seg1, seg2}}});
    }
    json cfg;
    cfg["input"]["synthetic"] = {
        {"scmc", {{"latitude", 31.2304}, {"longitude", 121.4737}}},
        {"blocks", blocks}};
    cfg["days"] = {1};
    cfg["selectors"] = {"low", "high", "mean", "median", "ensemble"};
    cfg["out"] = out_dir.string();
    cfg["seed"] = 7;
    return cfg;
}

std::string write_config(const TempDir& tmp, const json& cfg) {
    const auto path = (tmp.path / "exp.json").string();
    std::ofstream(path) << cfg.dump(2);
    return path;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("validate checks the config without running") {
    TempDir tmp;
    const auto cfg_path = write_config(tmp, toy_config(tmp.path / "out"));
    CHECK(run_tool("validate --config " + cfg_path) == 0);
    CHECK_FALSE(fs::exists(tmp.path / "out"));

    auto bad = toy_config(tmp.path / "out");
    bad["days"] = json::array();
    CHECK(run_tool("validate --config " + write_config(tmp, bad)) == 1);

    CHECK(run_tool("validate --config " +
                   (tmp.path / "missing.json").string()) == 1);
}

TEST_CASE("run writes every selector's report plus the comparison table") {
    TempDir tmp;
    const auto out = tmp.path / "out";
    const auto cfg_path = write_config(tmp, toy_config(out));
    REQUIRE(run_tool("run --config " + cfg_path) == 0);
    for (const char* sel : {"low", "high", "mean", "median", "ensemble"}) {
        CHECK(fs::exists(out / ("report_" + std::string(sel) + "_1d.json")));
        CHECK(fs::exists(out / ("report_" + std::string(sel) + "_1d.csv")));
    }
    CHECK(fs::exists(out / "comparison.csv"));
    CHECK(fs::exists(out / "switch_events_1d.csv"));
    // one switching series per profiled block
    const auto rep =
        json::parse(slurp(out / "report_ensemble_1d.json"));
    for (const auto& b : rep.at("blocks"))
        CHECK(fs::exists(out / ("switching_" +
                                b.at("block").get<std::string>() +
                                "_1d.csv")));
    // config echo makes the report self-describing
    CHECK(rep.at("config").at("seed") == 7);
    CHECK(rep.at("config").at("S_seconds") == 1800);
}

TEST_CASE("repeated runs are byte-identical") {
    TempDir tmp;
    const auto out1 = tmp.path / "o1";
    const auto out2 = tmp.path / "o2";
    const auto cfg_path = write_config(tmp, toy_config(out1));
    REQUIRE(run_tool("run --config " + cfg_path) == 0);
    REQUIRE(run_tool("run --config " + cfg_path + " --out " + out2.string() +
                     " --threads 4") == 0);
    for (const auto& entry : fs::directory_iterator(out1)) {
        const auto name = entry.path().filename();
        CAPTURE(name.string());
        REQUIRE(fs::exists(out2 / name));
        CHECK(slurp(entry.path()) == slurp(out2 / name));
    }
}

TEST_CASE("synth writes a loadable trace and honors the seed flag") {
    TempDir tmp;
    const auto out = tmp.path / "out";
    const auto cfg_path = write_config(tmp, toy_config(out));
    REQUIRE(run_tool("synth --config " + cfg_path) == 0);
    const auto trace_path = (out / "trace.csv").string();
    REQUIRE(fs::exists(trace_path));
    const auto t1 = ferryline::load_csv(trace_path);
    CHECK(t1.records.size() > 100);

    // an overriding seed must change the generated trace
    REQUIRE(run_tool("synth --config " + cfg_path + " --seed 8 --trace-out " +
                     (out / "t2.csv").string()) == 0);
    const auto t2 = ferryline::load_csv((out / "t2.csv").string());
    CHECK_FALSE(t1 == t2);
}

TEST_CASE("synth rejects a zero-length horizon with a config error") {
    TempDir tmp;
    auto cfg = toy_config(tmp.path / "out");
    for (auto& b : cfg["input"]["synthetic"]["blocks"])
        for (auto& s : b["segments"]) s["duration_s"] = 0;
    CHECK(run_tool("synth --config " + write_config(tmp, cfg)) == 1);
}

TEST_CASE("run on a missing trace file is a data error") {
    TempDir tmp;
    json cfg;
    cfg["input"]["csv"] = (tmp.path / "nope.csv").string();
    cfg["days"] = {1};
    cfg["out"] = (tmp.path / "out").string();
    CHECK(run_tool("run --config " + write_config(tmp, cfg)) == 2);
}
