// errors.hpp — Exception types shared by the cavrevive modules

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace cavrevive {

namespace detail {
inline std::string short_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}
} // namespace detail

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fock truncation cannot hold the requested state; carries the measured leakage.
struct CutoffTooSmall : Error {
    double leakage{0.0};
    CutoffTooSmall(const std::string& what, double leak)
        : Error(what + " (leakage " + detail::short_real(leak) + ")"), leakage(leak) {}
};

// Full-space state has weight outside the symmetric (Dicke) subspace.
struct NotSymmetric : Error {
    double residual{0.0};
    NotSymmetric(const std::string& what, double res)
        : Error(what + " (residual " + detail::short_real(res) + ")"), residual(res) {}
};

struct InvalidDensity : Error {
    using Error::Error;
};

struct BasinOutOfRange : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct InvalidParameter : Error {
    using Error::Error;
};

// Scenario configuration problems; message starts with the offending key path.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace cavrevive
