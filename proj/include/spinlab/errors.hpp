#pragma once

#include <stdexcept>
#include <string>

namespace spinlab {

// All failures are loud: callers get a typed exception with enough context
// to reproduce the offending call.

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite value out of a closed-form evaluation that should be safe.
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-form derivative disagrees with the finite-difference cross-check.
struct TranscriptionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |v3| = 1 at the evaluation point; the sphere-coordinate residual is undefined.
struct DegeneratePoleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Third derivative of the transition ramp requested at a junction point.
struct JunctionPointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BlowupError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ExtinctFrontError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Two algebraically equivalent right-hand-side routes disagree.
struct DerivationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GridMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace spinlab
