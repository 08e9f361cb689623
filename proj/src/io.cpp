#include "mb/io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>

#include "mb/error.hpp"
#include "mb/profiles.hpp"

namespace mb::io {
namespace {

constexpr const char* kEol = "\r\n";

void join(std::string& out, const std::vector<std::string>& cells) {
    for (std::size_t k = 0; k < cells.size(); ++k) {
        if (k) out += ',';
        out += cells[k];
    }
    out += kEol;
}

void check_field(const Field2D& f, const GridSpec& g, const char* name) {
    if (f.nx() != g.nx || f.nt() != g.nt)
        fail(ErrorKind::InvariantViolation, name, "field shape does not match the grid");
}

}  // namespace

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::string out;
    join(out, header);
    for (const auto& row : rows) {
        if (row.size() != header.size()) fail(ErrorKind::InvariantViolation, "row", "row width differs from header");
        for (std::size_t k = 0; k < row.size(); ++k) {
            if (k) out += ',';
            out += format_double(row[k]);
        }
        out += kEol;
    }
    return out;
}

std::string solution_csv(const SolutionField& sol) {
    const GridSpec& g = sol.grid;
    check_field(sol.u, g, "u");
    check_field(sol.v, g, "v");
    std::string out = std::string("x,t,u,v") + kEol;
    for (std::size_t n = 0; n < g.nt; ++n)
        for (std::size_t j = 0; j < g.nx; ++j) {
            out += format_double(g.x(j)) + ',' + format_double(g.t(n)) + ',' + format_double(sol.u(j, n)) + ',' +
                   format_double(sol.v(j, n)) + kEol;
        }
    return out;
}

std::string slice_csv(const FieldSlice& slice, const std::string& column) {
    const GridSpec& g = slice.grid;
    check_field(slice.values, g, "values");
    std::string out = "x,t," + column + kEol;
    for (std::size_t n = 0; n < g.nt; ++n)
        for (std::size_t j = 0; j < g.nx; ++j)
            out += format_double(g.x(j)) + ',' + format_double(g.t(n)) + ',' + format_double(slice.values(j, n)) + kEol;
    return out;
}

std::string conserved_csv(const ConservedSeries& c) {
    std::vector<std::vector<double>> rows;
    for (std::size_t n = 0; n < c.t.size(); ++n) rows.push_back({c.t[n], c.mass_u[n], c.mass_v[n], c.E[n], c.H[n]});
    return csv_table({"t", "mass_u", "mass_v", "E", "H"}, rows);
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::IoError, path.string(), "cannot open for writing");
    out << text;
    out.flush();
    if (!out) fail(ErrorKind::IoError, path.string(), "write failed");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::IoError, path.string(), "cannot open for reading");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string to_string(PlotKind k) {
    switch (k) {
        case PlotKind::Snapshot: return "snapshot";
        case PlotKind::Waterfall: return "waterfall";
        case PlotKind::Conserved: return "conserved";
    }
    return "snapshot";
}

PlotKind parse_plot_kind(const std::string& text) {
    for (PlotKind k : {PlotKind::Snapshot, PlotKind::Waterfall, PlotKind::Conserved})
        if (to_string(k) == text) return k;
    fail(ErrorKind::ParseError, "plot", "unknown plot kind '" + text + "'");
}

std::vector<std::filesystem::path> emit_plotdata(const SolutionField& sol, PlotKind kind,
                                                 const std::filesystem::path& dir, double alpha,
                                                 std::size_t time_index) {
    const GridSpec& g = sol.grid;
    check_field(sol.u, g, "u");
    check_field(sol.v, g, "v");
    std::vector<std::filesystem::path> written;
    switch (kind) {
        case PlotKind::Snapshot: {
            if (time_index >= g.nt) fail(ErrorKind::ParameterOutOfRange, "time_index", "beyond the last time level");
            std::vector<std::vector<double>> rows;
            for (std::size_t j = 0; j < g.nx; ++j) rows.push_back({g.x(j), sol.u(j, time_index), sol.v(j, time_index)});
            written.push_back(dir / ("snapshot_" + std::to_string(time_index) + ".csv"));
            write_text(written.back(), csv_table({"x", "u", "v"}, rows));
            break;
        }
        case PlotKind::Waterfall: {
            std::vector<std::string> header{"t"};
            for (std::size_t j = 0; j < g.nx; ++j) header.push_back("x=" + format_double(g.x(j)));
            for (auto [name, field] : {std::pair{"u", &sol.u}, std::pair{"v", &sol.v}}) {
                std::vector<std::vector<double>> rows;
                for (std::size_t n = 0; n < g.nt; ++n) {
                    std::vector<double> row{g.t(n)};
                    const auto s = field->slice(n);
                    row.insert(row.end(), s.begin(), s.end());
                    rows.push_back(std::move(row));
                }
                written.push_back(dir / (std::string("waterfall_") + name + ".csv"));
                write_text(written.back(), csv_table(header, rows));
            }
            break;
        }
        case PlotKind::Conserved:
            written.push_back(dir / "conserved.csv");
            write_text(written.back(), conserved_csv(conserved_quantities(sol, alpha)));
            break;
    }
    return written;
}

nlohmann::json RunManifest::to_json() const {
    return {{"subcommand", subcommand}, {"config", config_path}, {"out", out_dir},       {"seed", seed},
            {"threads", threads},       {"tool_version", tool_version}, {"timestamp", timestamp}, {"args", args}};
}

RunManifest RunManifest::from_json(const nlohmann::json& j) {
    try {
        RunManifest m;
        m.subcommand = j.at("subcommand").get<std::string>();
        m.config_path = j.value("config", "");
        m.out_dir = j.value("out", "");
        m.seed = j.value("seed", std::uint64_t{0});
        m.threads = j.value("threads", 0);
        m.tool_version = j.value("tool_version", std::string(kToolVersion));
        m.timestamp = j.value("timestamp", "");
        m.args = j.at("args").get<std::vector<std::string>>();
        return m;
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::ParseError, "manifest", e.what());
    }
}

RunManifest load_manifest(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(ErrorKind::ParseError, path.string(), e.what());
    }
    return RunManifest::from_json(j);
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace mb::io
