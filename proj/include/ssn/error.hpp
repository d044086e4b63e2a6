#pragma once

#include <stdexcept>
#include <string>

namespace ssn {

/// Raised for every recoverable failure in the library: malformed input
/// files, shape mismatches, coverage failures and invalid arguments.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ssn
