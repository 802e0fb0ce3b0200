#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kcn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Syntax error in an expression source string. `offset` is the byte
/// offset of the first offending character.
struct ParseError : Error {
    ParseError(const std::string& msg, std::size_t offset_)
        : Error(msg + " (offset " + std::to_string(offset_) + ")"), offset(offset_) {}
    std::size_t offset;
};

/// Numeric evaluation left the domain of a subexpression (division by ~0,
/// sqrt of a non-positive argument).
struct DomainError : Error {
    DomainError(const std::string& msg, std::string subexpression_)
        : Error(msg + " in `" + subexpression_ + "`"), subexpression(std::move(subexpression_)) {}
    std::string subexpression;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct MissingJet : Error {
    using Error::Error;
};

struct SingularMetric : Error {
    using Error::Error;
};

struct SingularForm : Error {
    using Error::Error;
};

struct SingularEndomorphism : Error {
    explicit SingularEndomorphism(double abs_det_)
        : Error("endomorphism is singular (|det| = " + std::to_string(abs_det_) + ")"),
          abs_det(abs_det_) {}
    double abs_det;
};

/// A (1,1) candidate that is not Omega-skew-symmetric cannot come from a
/// 2-form; the residual is the largest asymmetry entry found.
struct NotOmegaSkew : Error {
    explicit NotOmegaSkew(double residual_)
        : Error("tensor field is not Omega-skew-symmetric (residual " +
                std::to_string(residual_) + ")"),
          residual(residual_) {}
    double residual;
};

struct UnknownBuiltin : Error {
    explicit UnknownBuiltin(const std::string& name)
        : Error("unknown builtin chart `" + name + "`") {}
};

/// Error in a chart definition file; `line` is 1-based.
struct DefinitionError : Error {
    DefinitionError(const std::string& msg, int line_)
        : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
    explicit DefinitionError(const std::string& msg) : Error(msg), line(0) {}
    int line;
};

}  // namespace kcn
