#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mb/core.hpp"
#include "mb/nonlinear.hpp"
#include "mb/utm_linear.hpp"

namespace mb::io {

inline constexpr const char* kToolVersion = "1.0.0";

/// CSV text is RFC 4180 with CRLF line ends and shortest round-trip numbers.
std::string solution_csv(const SolutionField& sol);                          // x,t,u,v
std::string slice_csv(const FieldSlice& slice, const std::string& column);   // x,t,<column>
std::string conserved_csv(const ConservedSeries& c);                         // t,mass_u,mass_v,E,H
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows);

/// Keys sorted, two-space indent, trailing newline.
std::string json_text(const nlohmann::json& j);

/// Replaces the file; raises IoError when it cannot be written.
void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

enum class PlotKind { Snapshot, Waterfall, Conserved };

std::string to_string(PlotKind k);
PlotKind parse_plot_kind(const std::string& text);

/// Plot-ready CSV files in `dir`:
///   snapshot   snapshot_<n>.csv with x,u,v at time index n
///   waterfall  waterfall_u.csv and waterfall_v.csv, one row per time: t followed by nx values
///   conserved  conserved.csv
std::vector<std::filesystem::path> emit_plotdata(const SolutionField& sol, PlotKind kind,
                                                 const std::filesystem::path& dir, double alpha,
                                                 std::size_t time_index = 0);

/// Enough to rerun a command: its arguments plus where and when it ran.
struct RunManifest {
    std::string subcommand;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string tool_version = kToolVersion;
    std::string timestamp;
    std::vector<std::string> args;  // full command line without the program name

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

RunManifest load_manifest(const std::filesystem::path& path);

/// UTC time as 2026-01-31T12:00:00Z.
std::string utc_timestamp();

}  // namespace mb::io
