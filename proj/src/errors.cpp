#include "ocgw/errors.hpp"

namespace ocgw {

const char* error_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::DivisionByZero: return "DivisionByZero";
        case ErrorKind::PoleAtRestriction: return "PoleAtRestriction";
        case ErrorKind::InvalidCone: return "InvalidCone";
        case ErrorKind::NotAFlag: return "NotAFlag";
        case ErrorKind::NonGenericFraming: return "NonGenericFraming";
        case ErrorKind::NotOuterBrane: return "NotOuterBrane";
        case ErrorKind::DuplicateBrane: return "DuplicateBrane";
        case ErrorKind::InfeasibleDegree: return "InfeasibleDegree";
        case ErrorKind::UnsupportedTwistedEdge: return "UnsupportedTwistedEdge";
        case ErrorKind::OracleRequired: return "OracleRequired";
        case ErrorKind::MissingDivisorEntry: return "MissingDivisorEntry";
        case ErrorKind::InvalidInput: return "InvalidInput";
        case ErrorKind::ScopeError: return "ScopeError";
        case ErrorKind::Internal: return "Internal";
    }
    return "Unknown";
}

}  // namespace ocgw
