#pragma once

#include <stdexcept>
#include <string>

namespace ocgw {

enum class ErrorKind {
    DivisionByZero,
    PoleAtRestriction,
    InvalidCone,
    NotAFlag,
    NonGenericFraming,
    NotOuterBrane,
    DuplicateBrane,
    InfeasibleDegree,
    UnsupportedTwistedEdge,
    OracleRequired,
    MissingDivisorEntry,
    InvalidInput,
    ScopeError,
    Internal,
};

const char* error_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace ocgw
