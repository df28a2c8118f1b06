#pragma once

#include <stdexcept>
#include <string>

namespace doblab {

/// Broad failure classes; each maps onto one CLI exit code.
enum class ErrorClass { config, numeric, io };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const noexcept { return cls_; }

private:
    ErrorClass cls_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorClass::config, what) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(ErrorClass::io, what) {}
};

enum class NumericFault {
    degenerate_input,
    algebraic_degeneracy,
    pole_evaluation,
    root_finder,
    divergence,
    no_contact,
    plotting,
};

class NumericError : public Error {
public:
    NumericError(NumericFault fault, const std::string& what)
        : Error(ErrorClass::numeric, what), fault_(fault) {}
    NumericFault fault() const noexcept { return fault_; }

private:
    NumericFault fault_;
};

}  // namespace doblab
