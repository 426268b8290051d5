#pragma once

#include <stdexcept>
#include <string>

namespace ridgecr {

// Violated caller contract (bad argument, unsupported order, r out of range, ...).
class PreconditionError : public std::invalid_argument {
public:
    explicit PreconditionError(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure at runtime (singular matrix, empty ridge, degenerate frame, ...).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or unreadable input file.
class FileFormatError : public std::runtime_error {
public:
    explicit FileFormatError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ridgecr
