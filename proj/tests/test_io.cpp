#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "mb/error.hpp"
#include "mb/io.hpp"
#include "mb/profiles.hpp"

using namespace mb;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("mb_io_" + name);
    fs::remove_all(p);
    return p;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::size_t at = 0;
    while (at < text.size()) {
        const std::size_t e = text.find("\r\n", at);
        REQUIRE(e != std::string::npos);
        out.push_back(text.substr(at, e - at));
        at = e + 2;
    }
    return out;
}

std::size_t columns(const std::string& line) { return std::count(line.begin(), line.end(), ',') + 1; }

SolutionField gaussian_field() {
    SolutionField s;
    s.grid.L = 10.0;
    s.grid.nx = 21;
    s.grid.T = 0.1;
    s.grid.nt = 6;
    s.u = Field2D(21, 6);
    s.v = Field2D(21, 6);
    const Profile g = Profile::parse("gaussian(center=5, width=1)");
    for (std::size_t n = 0; n < 6; ++n)
        for (std::size_t j = 0; j < 21; ++j) {
            s.u(j, n) = g(s.grid.x(j) - 0.5 * s.grid.t(n));
            s.v(j, n) = 0.5 * s.u(j, n);
        }
    return s;
}

}  // namespace

TEST_CASE("solution and table CSV") {
    const SolutionField s = gaussian_field();
    const auto rows = lines(io::solution_csv(s));
    CHECK(rows.front() == "x,t,u,v");
    CHECK(rows.size() == 1 + 21 * 6);
    CHECK(rows[1].rfind("0,0,", 0) == 0);
    CHECK(rows[2].rfind("0.5,0,", 0) == 0);
    // shortest round trip
    CHECK(io::csv_table({"a"}, {{0.1}, {1e-300}}) == "a\r\n0.1\r\n1e-300\r\n");
    CHECK_THROWS_AS(io::csv_table({"a", "b"}, {{1.0}}), Error);
    SolutionField bad = s;
    bad.u = Field2D(3, 3);
    CHECK_THROWS_AS(io::solution_csv(bad), Error);
}

TEST_CASE("plot data: snapshot of a zero field") {
    SolutionField z = gaussian_field();
    z.u = Field2D(21, 6);
    z.v = Field2D(21, 6);
    const fs::path dir = scratch("zero");
    const auto files = io::emit_plotdata(z, io::PlotKind::Snapshot, dir, 1.0, 0);
    REQUIRE(files.size() == 1);
    const auto rows = lines(io::read_text(files[0]));
    CHECK(rows.front() == "x,u,v");
    CHECK(rows.size() == 22);
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].substr(rows[k].find(',')) == ",0,0");
    CHECK_THROWS_AS(io::emit_plotdata(z, io::PlotKind::Snapshot, dir, 1.0, 6), Error);
}

TEST_CASE("plot data: conserved and waterfall schemas") {
    const SolutionField s = gaussian_field();
    const fs::path dir = scratch("schema");
    const auto c = io::emit_plotdata(s, io::PlotKind::Conserved, dir, 2.0);
    const auto crow = lines(io::read_text(c.at(0)));
    CHECK(crow.front() == "t,mass_u,mass_v,E,H");
    CHECK(crow.size() == 7);
    for (const auto& r : crow) CHECK(columns(r) == 5);

    const auto w = io::emit_plotdata(s, io::PlotKind::Waterfall, dir, 2.0);
    REQUIRE(w.size() == 2);
    for (const auto& f : w) {
        const auto rows = lines(io::read_text(f));
        CHECK(rows.size() - 1 == s.grid.nt);  // header plus one row per time
        for (const auto& r : rows) CHECK(columns(r) == s.grid.nx + 1);
    }
    CHECK(io::parse_plot_kind("waterfall") == io::PlotKind::Waterfall);
    CHECK_THROWS_AS(io::parse_plot_kind("surface"), Error);
}

TEST_CASE("write errors and manifests") {
    try {
        io::write_text("/proc/mb-not-writable/x.csv", "x");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::IoError);
    }
    CHECK_THROWS_AS(io::read_text("/nonexistent/manifest.json"), Error);

    io::RunManifest m;
    m.subcommand = "counterexample";
    m.out_dir = "out";
    m.seed = 42;
    m.threads = 1;
    m.timestamp = io::utc_timestamp();
    m.args = {"--out", "out", "counterexample", "--N", "16"};
    const fs::path dir = scratch("manifest");
    io::write_text(dir / "manifest.json", io::json_text(m.to_json()));
    const io::RunManifest r = io::load_manifest(dir / "manifest.json");
    CHECK(r.args == m.args);
    CHECK(r.seed == 42);
    CHECK(r.threads == 1);
    CHECK(r.timestamp.size() == 20);
    CHECK(r.tool_version == io::kToolVersion);
    io::write_text(dir / "broken.json", "{\"args\": 3}");
    CHECK_THROWS_AS(io::load_manifest(dir / "broken.json"), Error);
}

TEST_CASE("JSON text has sorted keys") {
    const std::string t = io::json_text(nlohmann::json{{"zeta", 1}, {"alpha", 2}});
    CHECK(t.find("alpha") < t.find("zeta"));
    CHECK(t.back() == '\n');
}
