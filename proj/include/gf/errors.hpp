#pragma once

#include <stdexcept>
#include <string>

namespace gf {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// hamlang
struct SyntaxError : Error {
    SyntaxError(std::size_t pos, const std::string& expected)
        : Error("syntax error at position " + std::to_string(pos) + ": expected " + expected),
          position(pos), expected(expected) {}
    std::size_t position;
    std::string expected;
};
struct UnknownVariable : Error {
    UnknownVariable(std::size_t pos, const std::string& name)
        : Error("unknown variable '" + name + "' at position " + std::to_string(pos)),
          position(pos), name(name) {}
    std::size_t position;
    std::string name;
};
struct ArityError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};

// flows and lifts
struct IntegrationFailure : Error {
    using Error::Error;
};
struct NonFiniteHamiltonian : Error {
    using Error::Error;
};
struct JacobianUnavailable : Error {
    using Error::Error;
};
struct NotEquivariant : Error {
    NotEquivariant(double violation)
        : Error("lift is not antipodally equivariant, max violation " + std::to_string(violation)),
          max_violation(violation) {}
    double max_violation;
};

// generating functions
struct NotFiberCritical : Error {
    using Error::Error;
};
struct DimensionMismatch : Error {
    using Error::Error;
};
struct NearIdentityMinusOne : Error {
    using Error::Error;
};
struct ProjectionNotBijective : Error {
    using Error::Error;
};
struct NewtonDivergence : Error {
    using Error::Error;
};
struct NotIdentityGenerator : Error {
    using Error::Error;
};
struct InconsistentSystem : Error {
    using Error::Error;
};
struct ViolationFound : Error {
    using Error::Error;
};

// homology
struct ResolutionTooCoarse : Error {
    using Error::Error;
};

// sweep
struct GridTooCoarse : Error {
    using Error::Error;
};
struct NewtonBudgetExhausted : Error {
    using Error::Error;
};
struct ZeroBaseCoordinate : Error {
    using Error::Error;
};

} // namespace gf
