#pragma once

#include <filesystem>
#include <string>

#include "mb/core.hpp"
#include "mb/profiles.hpp"

namespace mb {

struct DataProfiles {
    Profile u0, v0, bdry_u, bdry_v;
    ForcingProfile f1, f2;

    ProblemData sample(const GridSpec& grid) const;
    bool operator==(const DataProfiles&) const = default;
};

/// Optional [solver] section: nonlinear iteration controls and coupling constants.
struct SolverSettings {
    double T_star = 0.0;  // 0 means "use grid.T"
    int max_iters = 25;
    double tol = 1e-8;
    double c0 = 0.1;
    double coupling_u = 0.5;
    double coupling_v = 1.0;

    bool operator==(const SolverSettings&) const = default;
};

struct RunConfig {
    MBParams params;
    SobolevIndices indices;
    GridSpec grid;
    DataProfiles profiles;
    SolverSettings solver;

    ProblemData data() const { return profiles.sample(grid); }
    void validate() const;
};

bool same_record(const RunConfig& a, const RunConfig& b);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
std::string format_config(const RunConfig& cfg);
void save_config(const RunConfig& cfg, const std::filesystem::path& path);

}  // namespace mb
