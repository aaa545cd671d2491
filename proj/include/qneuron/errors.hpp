#pragma once

#include <stdexcept>
#include <string>

namespace qneuron {

// Bad user input: shapes, ranges, malformed configuration.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical inconsistency detected at run time.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qneuron
