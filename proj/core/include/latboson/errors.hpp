#pragma once

#include <stdexcept>
#include <string>

namespace latboson {

// Bad arguments: dimension mismatches, missing optional inputs, parameters
// outside their stated domain.
struct invalid_input_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A computation was requested beyond the configured size caps
// (basis dimension, permanent order, enumeration volume).
struct scale_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numerical failure: eigensolver non-convergence, inconsistent residuals.
struct numeric_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A block operator could not be inverted; carries the smallest singular
// value of the offending factor.
struct inversion_error : std::runtime_error {
    inversion_error(const std::string& what, double smallest_sv)
        : std::runtime_error(what), smallest_singular_value(smallest_sv) {}
    double smallest_singular_value;
};

// The particle-number sum for the grand-canonical partition function does
// not converge for the given chemical potential.
struct divergence_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The principal branch of a logarithm is undefined (argument hit zero) or
// a branch jump was detected along a continuity ray.
struct branch_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace latboson
