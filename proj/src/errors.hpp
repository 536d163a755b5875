#pragma once

#include <stdexcept>
#include <string>

namespace amw {

// Error taxonomy mirrors the CLI exit-code classes: parse=2, domain=3,
// convergence=4, io=5.

class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, long line = -1)
        : std::runtime_error(line >= 0 ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

class DomainError : public std::runtime_error {
public:
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConvergenceError : public std::runtime_error {
public:
    explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace amw
