#include <doctest.h>

#include <filesystem>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "mb/cli.hpp"
#include "mb/io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = MB_TEST_DATA_DIR;

struct Run {
    int code;
    std::string out, err;
};

Run mb_run(std::vector<std::string> args) {
    std::ostringstream out, err;
    auto* o = std::cout.rdbuf(out.rdbuf());
    auto* e = std::cerr.rdbuf(err.rdbuf());
    const int code = mb::cli::run(args);
    std::cout.rdbuf(o);
    std::cerr.rdbuf(e);
    return {code, out.str(), err.str()};
}

std::string scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mb_cli_" + name);
    fs::remove_all(p);
    return p.string();
}

std::size_t line_count(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

// last stderr line must be one JSON record
nlohmann::json error_record(const std::string& err) {
    std::string s = err;
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return nlohmann::json::parse(s.substr(s.rfind('\n') == std::string::npos ? 0 : s.rfind('\n') + 1));
}

}  // namespace

TEST_CASE("resonance table") {
    const std::string dir = scratch("res");
    const Run r = mb_run({"--out", dir, "resonance", "--alpha-min", "0.2", "--alpha-max", "6", "--steps", "30"});
    REQUIRE(r.code == 0);
    const std::string csv = mb::io::read_text(fs::path(dir) / "resonance.csv");
    CHECK(csv.rfind("alpha,s_c,s_c_inclusive,", 0) == 0);
    CHECK(line_count(csv) == 1 + 31);
    CHECK(fs::exists(fs::path(dir) / "manifest.json"));
}

TEST_CASE("counterexample table") {
    const std::string dir = scratch("ce");
    const Run r = mb_run({"--out", dir, "counterexample", "--alpha", "4", "--s", "0", "--N", "16", "--N", "32", "--N", "64"});
    REQUIRE(r.code == 0);
    const std::string csv = mb::io::read_text(fs::path(dir) / "counterexample.csv");
    CHECK(csv.rfind("N,theta_norm,cf_norm,ratio,local_slope\r\n", 0) == 0);
    CHECK(line_count(csv) == 4);
    const auto meta = nlohmann::json::parse(mb::io::read_text(fs::path(dir) / "meta.json"));
    CHECK(meta["slope"].get<double>() == doctest::Approx(0.25).epsilon(0.05));
    CHECK(mb_run({"--out", dir, "counterexample", "--N", "16", "--N", "32"}).code == 1);
}

TEST_CASE("solve: outputs, determinism and manifest replay") {
    const std::string a = scratch("solve_a"), b = scratch("solve_b"), c = scratch("solve_c");
    const std::string cfg = (kData / "robin.toml").string();
    const Run r = mb_run({"--config", cfg, "--out", a, "solve", "--plot", "conserved", "--plot", "snapshot"});
    REQUIRE(r.code == 0);
    for (const char* f : {"solution.csv", "conserved.csv", "meta.json", "config.toml", "snapshot_0.csv", "manifest.json"})
        CHECK(fs::exists(fs::path(a) / f));
    const auto meta = nlohmann::json::parse(mb::io::read_text(fs::path(a) / "meta.json"));
    CHECK(meta["converged"] == true);
    CHECK(meta["conserved_drift"]["E_relative"].get<double>() < 1e-4);

    REQUIRE(mb_run({"--config", cfg, "--out", b, "--threads", "1", "solve"}).code == 0);
    CHECK(mb::io::read_text(fs::path(a) / "solution.csv") == mb::io::read_text(fs::path(b) / "solution.csv"));
    CHECK(mb::io::read_text(fs::path(a) / "meta.json") == mb::io::read_text(fs::path(b) / "meta.json"));

    REQUIRE(mb_run({"--manifest", (fs::path(a) / "manifest.json").string(), "--out", c}).code == 0);
    CHECK(mb::io::read_text(fs::path(a) / "solution.csv") == mb::io::read_text(fs::path(c) / "solution.csv"));
    CHECK(mb::io::read_text(fs::path(a) / "snapshot_0.csv") == mb::io::read_text(fs::path(c) / "snapshot_0.csv"));
}

TEST_CASE("linear and norms") {
    const std::string dir = scratch("lin");
    const std::string cfg = (kData / "robin.toml").string();
    REQUIRE(mb_run({"--config", cfg, "--out", dir, "linear"}).code == 0);
    const std::string csv = mb::io::read_text(fs::path(dir) / "solution.csv");
    CHECK(line_count(csv) == 1 + 241 * 26);
    REQUIRE(mb_run({"--config", cfg, "--out", dir, "norms"}).code == 0);
    const auto n = nlohmann::json::parse(mb::io::read_text(fs::path(dir) / "norms.json"));
    CHECK(n["data"]["u0_Hs"].get<double>() > 0.0);
    CHECK(n["solution"]["u"]["bourgain"].get<double>() > 0.0);
    CHECK(n["suggested_T_star"].get<double>() > 0.0);
}

TEST_CASE("validate exit codes") {
    const std::string dir = scratch("val");
    const Run ok = mb_run({"--out", dir, "validate", "--suite", "resonance"});
    CHECK(ok.code == 0);
    CHECK(ok.out.find("[PASS] 1 ") != std::string::npos);
    const auto report = nlohmann::json::parse(mb::io::read_text(fs::path(dir) / "validate.json"));
    CHECK(report["checks"].size() == 2);
    // the stated A4 norm constant is not met by the true rectangle area
    const Run bad = mb_run({"--out", dir, "validate", "--suite", "counterexample"});
    CHECK(bad.code == 2);
    CHECK(bad.out.find("[FAIL] 3 ") != std::string::npos);
}

TEST_CASE("errors: one JSON record on stderr, exit 1") {
    const std::string dir = scratch("err");
    Run r = mb_run({"--out", dir, "solve"});
    CHECK(r.code == 1);
    CHECK(error_record(r.err)["field"] == "config");

    r = mb_run({"frobnicate"});
    CHECK(r.code == 1);
    CHECK(r.err.find("Usage") != std::string::npos);
    CHECK(error_record(r.err)["error"] == "UsageError");

    mb::io::write_text(fs::path(dir) / "bad.toml", "[params]\nalpha = -1\n");
    r = mb_run({"--config", (fs::path(dir) / "bad.toml").string(), "--out", dir, "solve"});
    CHECK(r.code == 1);
    CHECK(error_record(r.err).contains("error"));

    r = mb_run({"validate", "--suite", "everything"});
    CHECK(r.code == 1);
    r = mb_run({"--manifest", "/nonexistent.json"});
    CHECK(r.code == 1);
    CHECK(error_record(r.err)["error"] == "IoError");
    CHECK(mb_run({"--help"}).code == 0);
}
