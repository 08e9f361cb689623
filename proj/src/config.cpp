#include "mb/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "mb/error.hpp"

namespace mb {

ProblemData DataProfiles::sample(const GridSpec& grid) const {
    ProblemData d;
    d.u0 = u0.sample(grid.dx(), grid.nx);
    d.v0 = v0.sample(grid.dx(), grid.nx);
    d.bdry_u = bdry_u.sample(grid.dt(), grid.nt);
    d.bdry_v = bdry_v.sample(grid.dt(), grid.nt);
    d.f1 = f1.sample(grid);
    d.f2 = f2.sample(grid);
    return d;
}

void RunConfig::validate() const {
    params.validate();
    indices.validate();
    grid.validate();
    if (solver.T_star < 0.0 || solver.T_star > grid.T)
        fail(ErrorKind::InvariantViolation, "T_star", "T_star must lie in (0, T]");
    if (!(solver.tol > 0.0)) fail(ErrorKind::InvariantViolation, "tol", "tol must be positive");
    if (solver.max_iters < 1) fail(ErrorKind::InvariantViolation, "max_iters", "must be at least 1");
    if (!(solver.c0 > 0.0)) fail(ErrorKind::InvariantViolation, "c0", "c0 must be positive");
}

bool same_record(const RunConfig& a, const RunConfig& b) {
    auto key = [](const RunConfig& c) {
        return std::tuple(c.params.alpha, c.params.gamma1, c.params.gamma2, c.params.boundary,
                          c.indices.s, c.indices.b, c.indices.b_prime, c.indices.theta,
                          c.indices.theta_prime, c.grid.L, c.grid.nx, c.grid.T, c.grid.nt, c.grid.R,
                          c.grid.nq);
    };
    return key(a) == key(b) && a.profiles == b.profiles && a.solver == b.solver;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string& v, const std::string& field) {
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    if (!v.empty() && v.front() == '"') fail(ErrorKind::ParseError, field, "unterminated string");
    return v;
}

double to_real(const std::string& v, const std::string& field) {
    double out = 0.0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        fail(ErrorKind::ParseError, field, "expected a number, got '" + v + "'");
    return out;
}

std::size_t to_count(const std::string& v, const std::string& field) {
    long long out = 0;
    auto res = std::from_chars(v.data(), v.data() + v.size(), out);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size() || out < 0)
        fail(ErrorKind::ParseError, field, "expected a nonnegative integer, got '" + v + "'");
    return static_cast<std::size_t>(out);
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, std::map<std::string, Setter>>& schema() {
    static const std::map<std::string, std::map<std::string, Setter>> table = {
        {"params",
         {{"alpha", [](RunConfig& c, const std::string& v) { c.params.alpha = to_real(v, "alpha"); }},
          {"gamma1", [](RunConfig& c, const std::string& v) { c.params.gamma1 = to_real(v, "gamma1"); }},
          {"gamma2", [](RunConfig& c, const std::string& v) { c.params.gamma2 = to_real(v, "gamma2"); }},
          {"boundary",
           [](RunConfig& c, const std::string& v) { c.params.boundary = parse_boundary_kind(v); }}}},
        {"indices",
         {{"s", [](RunConfig& c, const std::string& v) { c.indices.s = to_real(v, "s"); }},
          {"b",
           [](RunConfig& c, const std::string& v) {
               c.indices.b = to_real(v, "b");
               c.indices.b_prime = c.indices.b;
           }},
          {"theta",
           [](RunConfig& c, const std::string& v) {
               c.indices.theta = to_real(v, "theta");
               c.indices.theta_prime = c.indices.theta;
           }}}},
        {"grid",
         {{"L", [](RunConfig& c, const std::string& v) { c.grid.L = to_real(v, "L"); }},
          {"nx", [](RunConfig& c, const std::string& v) { c.grid.nx = to_count(v, "nx"); }},
          {"T", [](RunConfig& c, const std::string& v) { c.grid.T = to_real(v, "T"); }},
          {"nt", [](RunConfig& c, const std::string& v) { c.grid.nt = to_count(v, "nt"); }},
          {"R", [](RunConfig& c, const std::string& v) { c.grid.R = to_real(v, "R"); }},
          {"nq", [](RunConfig& c, const std::string& v) { c.grid.nq = to_count(v, "nq"); }}}},
        {"data",
         {{"u0", [](RunConfig& c, const std::string& v) { c.profiles.u0 = Profile::parse(v); }},
          {"v0", [](RunConfig& c, const std::string& v) { c.profiles.v0 = Profile::parse(v); }},
          {"bdry_u", [](RunConfig& c, const std::string& v) { c.profiles.bdry_u = Profile::parse(v); }},
          {"bdry_v", [](RunConfig& c, const std::string& v) { c.profiles.bdry_v = Profile::parse(v); }},
          {"f1", [](RunConfig& c, const std::string& v) { c.profiles.f1 = ForcingProfile::parse(v); }},
          {"f2", [](RunConfig& c, const std::string& v) { c.profiles.f2 = ForcingProfile::parse(v); }}}},
        {"solver",
         {{"T_star", [](RunConfig& c, const std::string& v) { c.solver.T_star = to_real(v, "T_star"); }},
          {"max_iters",
           [](RunConfig& c, const std::string& v) {
               c.solver.max_iters = static_cast<int>(to_count(v, "max_iters"));
           }},
          {"tol", [](RunConfig& c, const std::string& v) { c.solver.tol = to_real(v, "tol"); }},
          {"c0", [](RunConfig& c, const std::string& v) { c.solver.c0 = to_real(v, "c0"); }},
          {"coupling_u",
           [](RunConfig& c, const std::string& v) { c.solver.coupling_u = to_real(v, "coupling_u"); }},
          {"coupling_v",
           [](RunConfig& c, const std::string& v) { c.solver.coupling_v = to_real(v, "coupling_v"); }}}},
    };
    return table;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno);
        if (line.front() == '[') {
            if (line.back() != ']') fail(ErrorKind::ParseError, where, "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (!schema().count(section)) fail(ErrorKind::UnknownKey, section, "unknown section");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(ErrorKind::ParseError, where, "expected key = value");
        if (section.empty()) fail(ErrorKind::ParseError, where, "key outside of a section");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)), key);
        const auto& keys = schema().at(section);
        const auto it = keys.find(key);
        if (it == keys.end()) fail(ErrorKind::UnknownKey, section + "." + key, "unknown key");
        it->second(cfg, value);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::ParseError, path.string(), "cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string format_config(const RunConfig& c) {
    std::ostringstream o;
    auto num = [](double v) { return format_double(v); };
    o << "[params]\n"
      << "alpha = " << num(c.params.alpha) << "\n"
      << "gamma1 = " << num(c.params.gamma1) << "\n"
      << "gamma2 = " << num(c.params.gamma2) << "\n"
      << "boundary = \"" << to_string(c.params.boundary) << "\"\n\n"
      << "[indices]\n"
      << "s = " << num(c.indices.s) << "\n"
      << "b = " << num(c.indices.b) << "\n"
      << "theta = " << num(c.indices.theta) << "\n\n"
      << "[grid]\n"
      << "L = " << num(c.grid.L) << "\n"
      << "nx = " << c.grid.nx << "\n"
      << "T = " << num(c.grid.T) << "\n"
      << "nt = " << c.grid.nt << "\n"
      << "R = " << num(c.grid.R) << "\n"
      << "nq = " << c.grid.nq << "\n\n"
      << "[data]\n"
      << "u0 = \"" << c.profiles.u0.to_string() << "\"\n"
      << "v0 = \"" << c.profiles.v0.to_string() << "\"\n"
      << "bdry_u = \"" << c.profiles.bdry_u.to_string() << "\"\n"
      << "bdry_v = \"" << c.profiles.bdry_v.to_string() << "\"\n"
      << "f1 = \"" << c.profiles.f1.to_string() << "\"\n"
      << "f2 = \"" << c.profiles.f2.to_string() << "\"\n\n"
      << "[solver]\n"
      << "T_star = " << num(c.solver.T_star) << "\n"
      << "max_iters = " << c.solver.max_iters << "\n"
      << "tol = " << num(c.solver.tol) << "\n"
      << "c0 = " << num(c.solver.c0) << "\n"
      << "coupling_u = " << num(c.solver.coupling_u) << "\n"
      << "coupling_v = " << num(c.solver.coupling_v) << "\n";
    return o.str();
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) fail(ErrorKind::IoError, path.string(), "cannot write config file");
    out << format_config(cfg);
}

}  // namespace mb
