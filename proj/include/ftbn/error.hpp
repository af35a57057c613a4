#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ftbn {

/// One violated model invariant. `code` is a short machine-readable tag
/// (e.g. "cycle", "arity"); `subject` names the offending event, gate or node.
struct Diagnostic {
    std::string code;
    std::string subject;
    std::string message;
};

std::string to_string(const Diagnostic& d);

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input text (DSL or JSON). Line and column are 1-based; 0 when unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column);
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A model that parsed but violates a structural invariant.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Diagnostic> diagnostics);
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Evidence with probability zero under the model.
class ImpossibleEvidenceError : public Error {
public:
    using Error::Error;
};

/// Reference to a variable, event or state the model does not define.
class UnknownNameError : public Error {
public:
    using Error::Error;
};

/// Requested enumeration exceeds the configured state-space limit.
class StateSpaceError : public Error {
public:
    using Error::Error;
};

}  // namespace ftbn
