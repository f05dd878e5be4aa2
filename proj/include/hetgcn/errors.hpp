#pragma once

#include <stdexcept>
#include <string>

namespace hetgcn {

// Bad input data or configuration. The CLI maps this to exit code 1.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Non-finite values and other numeric failures. The CLI maps this to exit code 2.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hetgcn
