#pragma once

#include <stdexcept>
#include <string>

namespace lgt {

/// Malformed input: bad problem file, unknown key, parameter out of range.
class SchemaError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Well-formed input describing a problem that cannot be solved
/// (mass imbalance, non-closing boundary datum, non-convex domain, ...).
class InfeasibleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace lgt
