#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace netabc {

struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParseError : std::runtime_error {
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_number(line) {}
    std::size_t line_number;
};

// Raised whenever a computation needs a hop distance between two nodes in
// different connected components.
struct UnreachableError : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace netabc
