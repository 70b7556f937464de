#pragma once

#include <stdexcept>
#include <string>

namespace mwf {

// Wrong shapes, multiplicity mismatches, malformed documents.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Numerical breakdown: loss of positive definiteness, acos/asin out of range.
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace mwf
