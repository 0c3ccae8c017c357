#pragma once

#include <stdexcept>
#include <string>

namespace gwp {

/// Category of a kernel failure. The CLI maps these onto exit codes.
enum class ErrorKind {
    parse,         // malformed input text or document
    precondition,  // an operation's contract was violated by its inputs
    precision,     // not enough known coefficients to answer
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& what)
        : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// Short machine-readable tag, e.g. "division-by-zero".
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

class ParseError : public Error {
public:
    explicit ParseError(const std::string& what) : Error(ErrorKind::parse, "parse-error", what) {}
};

class PreconditionError : public Error {
public:
    PreconditionError(std::string code, const std::string& what)
        : Error(ErrorKind::precondition, std::move(code), what) {}
};

class PrecisionError : public Error {
public:
    PrecisionError(std::string code, const std::string& what)
        : Error(ErrorKind::precision, std::move(code), what) {}
};

}  // namespace gwp
