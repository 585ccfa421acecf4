#pragma once

#include <stdexcept>
#include <string>

namespace sijc {

// Family parameters violate a validity invariant (nonpositive mass, depth
// too shallow for a bound level, scaling ratio outside (0,1), ...).
struct InvalidFamily : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Operation not defined for the given family (e.g. grid builds for the
// abstract scaling chain, which has no closed-form superpotential).
struct UnsupportedFamily : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Level index past the last bound level; never clamped silently.
struct LevelOutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Drive strength must be nonnegative; imaginary couplings are rejected.
struct NegativeDriveStrength : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Dense symmetric storage fed with visibly asymmetric entries.
struct NotSymmetric : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct GridTooCoarse : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidGrid : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Analytic and numeric level sets cannot be paired up.
struct MatchFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Eigensolver iteration cap exceeded; index identifies the failing level.
struct ConvergenceFailure : std::runtime_error {
    ConvergenceFailure(const std::string& msg, std::size_t failing_index)
        : std::runtime_error(msg), index(failing_index) {}
    std::size_t index;
};

}  // namespace sijc
