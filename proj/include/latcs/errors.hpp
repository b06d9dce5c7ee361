#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace latcs {

/// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Misuse of lattice geometry: empty domains, points outside a box, bad nesting.
class DomainError : public Error {
public:
    explicit DomainError(const std::string& what) : Error(what) {}
};

/// An iterative solver failed to meet its contract. Carries the residual it
/// reached so callers can report how close it got.
class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_ = 0.0;
};

/// Invalid experiment configuration. Lists the offending field names.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, std::vector<std::string> fields = {})
        : Error(what), fields_(std::move(fields)) {}
    const std::vector<std::string>& fields() const noexcept { return fields_; }

private:
    std::vector<std::string> fields_;
};

} // namespace latcs
