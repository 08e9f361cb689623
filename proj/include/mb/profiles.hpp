#pragma once

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mb/core.hpp"

namespace mb {

/// Named analytic profile such as "gaussian(center=2.0, width=0.5, amp=1.0)".
///   zero()
///   constant(amp)
///   gaussian(center, width, amp)            amp*exp(-((x-center)/width)^2)
///   exp_decay(rate, amp)                    amp*exp(-rate*x)
///   sine_pulse(center, width, amp, freq)    gaussian envelope times sin(freq*(x-center))
struct Profile {
    std::string name = "zero";
    std::map<std::string, double> args;

    static Profile parse(const std::string& text);
    std::string to_string() const;

    double operator()(double x) const;
    std::vector<double> sample(double h, std::size_t n) const;

    /// Closed form of the integral of exp(-i x xi) f(x) over (0, inf), when one is known.
    std::optional<std::complex<double>> half_line_ft_exact(std::complex<double> xi) const;

    bool operator==(const Profile&) const = default;
};

/// Separable forcing "space * time" or "zero".
struct ForcingProfile {
    Profile space;
    Profile time;

    static ForcingProfile parse(const std::string& text);
    std::string to_string() const;
    bool is_zero() const { return space.name == "zero" || time.name == "zero"; }
    Field2D sample(const GridSpec& grid) const;

    bool operator==(const ForcingProfile&) const = default;
};

/// Shortest round-trip decimal form of a double, independent of locale.
std::string format_double(double v);

}  // namespace mb
