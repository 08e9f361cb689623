#include "mb/profiles.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

#include "mb/error.hpp"

namespace mb {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& field) {
    const std::string t = trim(text);
    double v = 0.0;
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size())
        fail(ErrorKind::ParseError, field, "not a number: '" + t + "'");
    return v;
}

struct ProfileShape {
    std::vector<std::string> required;
    std::map<std::string, double> defaults;
};

const std::map<std::string, ProfileShape>& shapes() {
    static const std::map<std::string, ProfileShape> table = {
        {"zero", {{}, {}}},
        {"constant", {{}, {{"amp", 1.0}}}},
        {"gaussian", {{"center", "width"}, {{"amp", 1.0}}}},
        {"exp_decay", {{}, {{"rate", 1.0}, {"amp", 1.0}}}},
        {"sine_pulse", {{"center", "width"}, {{"amp", 1.0}, {"freq", 0.0}}}},
    };
    return table;
}

}  // namespace

Profile Profile::parse(const std::string& text) {
    const std::string t = trim(text);
    const auto open = t.find('(');
    Profile p;
    if (open == std::string::npos) {
        p.name = t;
    } else {
        if (t.back() != ')') fail(ErrorKind::ParseError, t, "profile descriptor must end with ')'");
        p.name = trim(t.substr(0, open));
        const std::string body = t.substr(open + 1, t.size() - open - 2);
        std::size_t pos = 0;
        while (pos < body.size()) {
            auto comma = body.find(',', pos);
            if (comma == std::string::npos) comma = body.size();
            const std::string item = trim(body.substr(pos, comma - pos));
            pos = comma + 1;
            if (item.empty()) continue;
            const auto eq = item.find('=');
            if (eq == std::string::npos) fail(ErrorKind::ParseError, item, "expected key=value");
            p.args[trim(item.substr(0, eq))] = parse_number(item.substr(eq + 1), item);
        }
    }
    const auto it = shapes().find(p.name);
    if (it == shapes().end()) fail(ErrorKind::ParseError, p.name, "unknown profile");
    std::set<std::string> allowed(it->second.required.begin(), it->second.required.end());
    for (const auto& [k, v] : it->second.defaults) allowed.insert(k);
    for (const auto& [k, v] : p.args)
        if (!allowed.count(k)) fail(ErrorKind::UnknownKey, p.name + "." + k, "unknown profile argument");
    for (const auto& k : it->second.required)
        if (!p.args.count(k)) fail(ErrorKind::ParseError, p.name + "." + k, "missing profile argument");
    for (const auto& [k, v] : it->second.defaults) p.args.emplace(k, v);
    if (p.name == "sine_pulse" && p.args["freq"] == 0.0) p.args["freq"] = std::numbers::pi / p.args["width"];
    if (p.args.count("width") && !(p.args["width"] > 0.0))
        fail(ErrorKind::InvariantViolation, p.name + ".width", "width must be positive");
    return p;
}

std::string Profile::to_string() const {
    if (name == "zero") return "zero";
    std::string out = name + "(";
    bool first = true;
    for (const auto& [k, v] : args) {
        if (!first) out += ", ";
        out += k + "=" + format_double(v);
        first = false;
    }
    return out + ")";
}

double Profile::operator()(double x) const {
    if (name == "zero") return 0.0;
    const double amp = args.at("amp");
    if (name == "constant") return amp;
    if (name == "exp_decay") return amp * std::exp(-args.at("rate") * x);
    const double y = (x - args.at("center")) / args.at("width");
    const double envelope = amp * std::exp(-y * y);
    if (name == "gaussian") return envelope;
    return envelope * std::sin(args.at("freq") * (x - args.at("center")));
}

std::vector<double> Profile::sample(double h, std::size_t n) const {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = (*this)(h * static_cast<double>(j));
    return out;
}

std::optional<std::complex<double>> Profile::half_line_ft_exact(std::complex<double> xi) const {
    using cd = std::complex<double>;
    const cd I(0.0, 1.0);
    if (name == "zero") return cd(0.0);
    if (name == "exp_decay") return args.at("amp") / (args.at("rate") + I * xi);
    if (name == "gaussian" && std::imag(xi) == 0.0) {
        // Valid when the bump sits far from the origin (erfc factor equals 2).
        const double c = args.at("center"), w = args.at("width");
        if (c / w < 6.0) return std::nullopt;
        const double k = std::real(xi);
        return args.at("amp") * w * std::sqrt(std::numbers::pi) *
               std::exp(-I * c * k - k * k * w * w / 4.0);
    }
    return std::nullopt;
}

ForcingProfile ForcingProfile::parse(const std::string& text) {
    ForcingProfile f;
    const auto star = text.find('*');
    if (star == std::string::npos) {
        f.space = Profile::parse(text);
        if (f.space.name != "zero")
            fail(ErrorKind::ParseError, text, "forcing must be 'zero' or 'space_profile * time_profile'");
        f.time = Profile::parse("zero");
        return f;
    }
    f.space = Profile::parse(text.substr(0, star));
    f.time = Profile::parse(text.substr(star + 1));
    return f;
}

std::string ForcingProfile::to_string() const {
    if (space.name == "zero" && time.name == "zero") return "zero";
    return space.to_string() + " * " + time.to_string();
}

Field2D ForcingProfile::sample(const GridSpec& grid) const {
    Field2D f(grid.nx, grid.nt);
    if (is_zero()) return f;
    const auto sx = space.sample(grid.dx(), grid.nx);
    for (std::size_t n = 0; n < grid.nt; ++n) {
        const double tn = time(grid.t(n));
        for (std::size_t j = 0; j < grid.nx; ++j) f(j, n) = sx[j] * tn;
    }
    return f;
}

}  // namespace mb
