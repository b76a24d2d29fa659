#pragma once

#include <stdexcept>
#include <string>

namespace incasp {

// Base class for all errors raised by the engine.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// Input text could not be parsed; carries a 1-based source position.
class ParseError : public Error {
public:
    ParseError(int line, int column, const std::string& message)
        : Error("parse error at " + std::to_string(line) + ":" + std::to_string(column) + ": " + message),
          line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

// A requested computation exceeds a configured size cap.
class CapExceeded : public Error {
public:
    using Error::Error;
};

} // namespace incasp
