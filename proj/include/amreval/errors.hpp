#pragma once

#include <stdexcept>
#include <string>

namespace amreval {

// Malformed input data: penman text, embedding files, annotation files,
// corpus alignment.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Penman syntax error with a 1-based source location.
class ParseError : public DataError {
public:
    ParseError(const std::string& msg, int line, int column)
        : DataError(msg + " (line " + std::to_string(line) + ", column " +
                    std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// A library call that violates a documented precondition.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A broken internal invariant. Seeing one of these is a bug.
class InternalError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace amreval
