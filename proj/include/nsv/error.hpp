#pragma once

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>

namespace nsv {

/// Error categories raised by the simulator. Every failure carries one.
enum class ErrorKind {
    InvalidParameter,
    InvalidDomain,
    NonPositiveInitialDensity,
    EmptyCloud,
    NonPositiveDensity,
    DomainMismatch,
    SingularSystem,
    CFLViolation,
    OutOfDomain,
    PicardDiverged,
    BlowUpDetected,
    ZeroTotalMass,
    CloudMismatch,
    InsufficientSamples,
    NonPositiveValues,
    UnknownCase,
    ConfigError,
    UnknownKey,
    IoError,
};

inline const char* to_string(ErrorKind k) {
    switch (k) {
    case ErrorKind::InvalidParameter: return "InvalidParameter";
    case ErrorKind::InvalidDomain: return "InvalidDomain";
    case ErrorKind::NonPositiveInitialDensity: return "NonPositiveInitialDensity";
    case ErrorKind::EmptyCloud: return "EmptyCloud";
    case ErrorKind::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::CFLViolation: return "CFLViolation";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::PicardDiverged: return "PicardDiverged";
    case ErrorKind::BlowUpDetected: return "BlowUpDetected";
    case ErrorKind::ZeroTotalMass: return "ZeroTotalMass";
    case ErrorKind::CloudMismatch: return "CloudMismatch";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::NonPositiveValues: return "NonPositiveValues";
    case ErrorKind::UnknownCase: return "UnknownCase";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::UnknownKey: return "UnknownKey";
    case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

namespace detail {
inline std::string describe_constraint(const std::string& c) {
    if (c == ">0") return "must be positive";
    if (c == ">=0") return "must be non-negative";
    if (c.size() > 1 && c[0] == '>' && c[1] != '=') return "must exceed " + c.substr(1);
    return "must satisfy " + c;
}

inline std::string fmt_value(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}
} // namespace detail

/// A parameter violating its bound; `constraint` is the bound in compact
/// form (">0", ">1", ">=0", "finite").
class InvalidParameter : public Error {
public:
    InvalidParameter(std::string name, double value, std::string constraint)
        : Error(ErrorKind::InvalidParameter,
                name + " " + detail::describe_constraint(constraint) + " (got " +
                    detail::fmt_value(value) + ")"),
          name_(std::move(name)), value_(value), constraint_(std::move(constraint)) {}

    const std::string& name() const noexcept { return name_; }
    double value() const noexcept { return value_; }
    const std::string& constraint() const noexcept { return constraint_; }

private:
    std::string name_;
    double value_;
    std::string constraint_;
};

class ConfigError : public Error {
public:
    ConfigError(std::size_t line, const std::string& message)
        : Error(ErrorKind::ConfigError, "line " + std::to_string(line) + ": " + message),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class PicardDiverged : public Error {
public:
    PicardDiverged(int iterations, double residual)
        : Error(ErrorKind::PicardDiverged,
                "no convergence after " + std::to_string(iterations) +
                    " iterations (residual " + detail::fmt_value(residual) + ")"),
          iterations_(iterations), residual_(residual) {}

    int iterations() const noexcept { return iterations_; }
    double residual() const noexcept { return residual_; }

private:
    int iterations_;
    double residual_;
};

} // namespace nsv
