#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "hacomp/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(const std::vector<std::string>& args, const std::string& input = "") {
    std::istringstream in(input);
    std::ostringstream out, err;
    const int code = hacomp::cli::run(args, in, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "hacomp_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("example") {
    const auto r = invoke({"example"});
    CHECK(r.code == 0);
    CHECK(r.out.find("ctp=true") != std::string::npos);
    CHECK(r.out.find("cp=13/25") != std::string::npos);
    CHECK(r.out.find("ce=4/25") != std::string::npos);
    CHECK(r.out.find("cp_inh=8/25 cp_coll=5/25") != std::string::npos);
    CHECK(r.out.find("ce_inh=3/25 ce_coll=1/25") != std::string::npos);
    const auto md = invoke({"example", "--format", "markdown"});
    CHECK(md.out.find("| CP | 13 |") != std::string::npos);
    const auto js = invoke({"example", "--format", "json"});
    CHECK(nlohmann::json::parse(js.out).contains("summaries"));
}

TEST_CASE("power") {
    const auto r = invoke({"power", "--d", "0.8", "--alpha", "0.05", "--power", "0.8",
                           "--comparisons", "1", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(std::abs(j["per_group"].get<int>() - 26) <= 1);
    const auto bad = invoke({"power", "--d", "-1"});
    CHECK(bad.code == 1);
}

TEST_CASE("simulate then analyze through stdin") {
    const auto sim = invoke({"simulate", "--participants", "12", "--seed", "4",
                             "--uhci-human-mae", "200510"});
    REQUIRE(sim.code == 0);
    const auto a = invoke({"analyze", "-", "--task", "regression"}, sim.out);
    REQUIRE(a.code == 0);
    CHECK(a.err.find("warning") == std::string::npos);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["summaries"].size() == 2);
    CHECK(j["comparisons"].size() == 6);
    const auto again = invoke({"analyze", "-", "--task", "regression"}, sim.out);
    CHECK(again.out == a.out);
}

TEST_CASE("classification pipeline with a schema file") {
    const auto log = scratch("cls.jsonl");
    const auto schema = scratch("cls_schema.json");
    const auto sim = invoke({"simulate", "--task", "classification", "--participants", "6",
                             "--instances", "30", "--log-format", "jsonl", "--output",
                             log.string(), "--schema-out", schema.string()});
    REQUIRE(sim.code == 0);
    const auto a = invoke({"analyze", log.string(), "--schema", schema.string(), "--format",
                           "markdown", "-q"});
    REQUIRE(a.code == 0);
    CHECK(a.out.find("#### Decomposition") != std::string::npos);
    CHECK(a.err.empty());
}

TEST_CASE("analyze errors map to exit codes") {
    const std::string header = "participant_id,condition_id,instance_id,truth,human,ai,team\n";
    const auto empty = invoke({"analyze", "-", "--task", "regression"}, header);
    CHECK(empty.code == 1);
    CHECK(empty.err.find("empty dataset") != std::string::npos);

    const auto bad_rows =
        invoke({"analyze", "-", "--task", "regression", "--error-json"}, header + "p,c,1,x,1,1,1\n");
    CHECK(bad_rows.code == 1);
    const auto j = nlohmann::json::parse(bad_rows.err);
    CHECK(j["error"]["kind"] == "validation");
    CHECK(j["error"]["exit_code"] == 1);

    const auto missing = invoke({"analyze", "/nonexistent/file.csv", "--task", "regression"});
    CHECK(missing.code == 2);

    CHECK(invoke({"analyze", "--task", "regression"}).code == 1);
    CHECK(invoke({"analyze", "-"}).code == 1);
    CHECK(invoke({"analyze", "-", "--task", "regression", "--condition-a", "x"}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"simulate", "--ai-mae", "9e9"}).code == 1);
    CHECK(invoke({"--help"}).code == 0);
}

TEST_CASE("config file values yield to flags") {
    const auto cfg = scratch("config.json");
    std::ofstream(cfg) << R"({"participants": 3, "instances": 2, "seed": 5})";
    const auto from_cfg = invoke({"--config", cfg.string(), "simulate"});
    REQUIRE(from_cfg.code == 0);
    const auto explicit_flags = invoke({"simulate", "--participants", "3", "--instances", "2",
                                        "--seed", "5"});
    CHECK(from_cfg.out == explicit_flags.out);
    const auto overridden = invoke({"--config", cfg.string(), "simulate", "--participants", "4"});
    CHECK(std::count(overridden.out.begin(), overridden.out.end(), '\n') == 1 + 4 * 2);

    const auto missing = invoke({"--config", "/nonexistent.json", "power"});
    CHECK(missing.code == 2);
}

TEST_CASE("output directory from the environment") {
    const auto dir = scratch("envdir");
    fs::remove_all(dir);
    ::setenv("HACOMP_OUTPUT_DIR", dir.string().c_str(), 1);
    const auto sim = invoke({"simulate", "--participants", "3"});
    ::unsetenv("HACOMP_OUTPUT_DIR");
    CHECK(sim.code == 0);
    CHECK(sim.out.empty());
    CHECK(fs::exists(dir / "simulated.csv"));

    const auto bundle = scratch("bundle");
    fs::remove_all(bundle);
    const auto a = invoke({"analyze", (dir / "simulated.csv").string(), "--task", "regression",
                           "--format", "csv", "--output", bundle.string()});
    CHECK(a.code == 0);
    CHECK(fs::exists(bundle / "summaries.csv"));
    CHECK(fs::exists(bundle / "chart.json"));
    CHECK(invoke({"analyze", "-", "--task", "regression", "--format", "csv"}).code == 1);
}

TEST_CASE("screening flags and validation report") {
    const std::string text =
        "participant_id,condition_id,instance_id,truth,human,ai,team\n"
        "p1,c,1,500000,500000,500000,500000\n"
        "p2,c,1,500000,500000,500000,2100000\n"
        "p3,c,1,500000,510000,490000,505000\n";
    const auto report = scratch("validation.json");
    const auto r = invoke({"analyze", "-", "--task", "regression", "--max-value", "2000000",
                           "--report-out", report.string()},
                          text);
    REQUIRE(r.code == 0);
    std::ifstream f(report);
    const auto j = nlohmann::json::parse(f);
    CHECK(j["dropped"].size() == 1);
    CHECK(j["screened_rows"] == 1);
    CHECK(j["accepted_count"] == 2);
}
