#pragma once
#include <stdexcept>
#include <string>

namespace dpw {

// Failure taxonomy shared by the library and the CLI.  Each class maps to a
// distinct process exit code (see tools/dpw_cli.cpp).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& w) : std::runtime_error(w) {}
};

struct NotBalancedError : std::runtime_error {
    explicit NotBalancedError(const std::string& w) : std::runtime_error(w) {}
};

struct DegenerateError : std::runtime_error {
    explicit DegenerateError(const std::string& w) : std::runtime_error(w) {}
};

struct MaxIterationsError : std::runtime_error {
    explicit MaxIterationsError(const std::string& w) : std::runtime_error(w) {}
};

struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& w) : std::runtime_error(w) {}
};

}  // namespace dpw
