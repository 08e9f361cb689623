#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace mb {

/// Outcome of one end-to-end check, with the measured quantities behind it.
struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
    nlohmann::json metrics = nlohmann::json::object();
};

struct CheckEntry {
    int id;
    std::string name;
    std::string suite;
    std::function<CheckResult(std::uint64_t seed)> run;
};

/// The ten numbered checks, in order. Suites group them by module:
/// resonance {1, 2}, counterexample {3}, linear {4-7}, nonlinear {8}, norms {9}, calculus {10}.
const std::vector<CheckEntry>& check_registry();

std::vector<std::string> suite_names();

/// Runs one check, turning library errors into a failed result.
CheckResult run_check(const CheckEntry& e, std::uint64_t seed = 7);

/// Runs every check of `suite` ("all" runs everything). Unknown names raise ParameterOutOfRange.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed = 7);

nlohmann::json to_json(const CheckResult& r);

/// "[PASS] 3 name: detail (1.2 s)"
std::string summary_line(const CheckResult& r);

}  // namespace mb
