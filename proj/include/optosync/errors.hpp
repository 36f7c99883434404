#ifndef OPTOSYNC_ERRORS_HPP
#define OPTOSYNC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace optosync {

// Base class for every error raised by the library.
struct SimulationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fixed-point search failed or found multiple operating points.
struct NoConvergence : SimulationError {
    using SimulationError::SimulationError;
};

// Linearized dynamics have a growing mode at the operating point.
struct Unstable : SimulationError {
    using SimulationError::SimulationError;
};

// Adaptive step size underflowed or the step budget ran out.
struct StepFailure : SimulationError {
    using SimulationError::SimulationError;
};

// A propagated state violated a physicality bound.
struct UnphysicalState : SimulationError {
    using SimulationError::SimulationError;
};

// Population reached the top Fock level of a truncated mode.
struct TruncationLeak : SimulationError {
    using SimulationError::SimulationError;
};

struct DimensionMismatch : SimulationError {
    using SimulationError::SimulationError;
};

// Eigenvalues that must come in pairs failed to pair up.
struct NumericalDegeneracy : SimulationError {
    using SimulationError::SimulationError;
};

struct ConfigError : SimulationError {
    using SimulationError::SimulationError;
};

struct IoError : SimulationError {
    using SimulationError::SimulationError;
};

} // namespace optosync

#endif
