#pragma once

#include <stdexcept>
#include <string>

namespace fomc {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Ill-sorted or otherwise rejected input.
class SortError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class CompilationFailure : public Error {
public:
    CompilationFailure(const std::string& message, std::string stuck)
        : Error(message), stuck_(std::move(stuck)) {}
    explicit CompilationFailure(const std::string& message) : Error(message) {}

    // Pretty-printed sentence no rule could make progress on.
    const std::string& stuck_sentence() const { return stuck_; }

private:
    std::string stuck_;
};

class MissingBaseCase : public Error {
public:
    using Error::Error;
};

class TerminationViolation : public Error {
public:
    using Error::Error;
};

class OracleGuardExceeded : public Error {
public:
    using Error::Error;
};

class Timeout : public Error {
public:
    using Error::Error;
};

// Violated internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace fomc
