#pragma once

#include <stdexcept>
#include <string>

namespace seprune {

// Bad input data or files. The CLI maps this to exit code 3.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Numerical failure during computation (non-finite loss, failed solve).
// The CLI maps this to exit code 4.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace seprune
