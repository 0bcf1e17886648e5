#pragma once

#include <stdexcept>
#include <string>

namespace symreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A value violates the domain of the operation (bad membership, bad bandwidth, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Two objects that must agree (group variant, covariate space, parent group) do not.
class IncompatibleError : public Error {
public:
    using Error::Error;
};

/// Uniform sampling was requested on a group without a normalisable Haar measure.
class NonCompactError : public Error {
public:
    using Error::Error;
};

/// The target point does not lie on the orbit of the base point.
class OffOrbitError : public Error {
public:
    OffOrbitError(const std::string& what, double deviation)
        : Error(what + " (deviation " + std::to_string(deviation) + ")"), deviation_(deviation) {}

    double deviation() const noexcept { return deviation_; }

private:
    double deviation_;
};

/// Bad configuration value. `field()` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace symreg
