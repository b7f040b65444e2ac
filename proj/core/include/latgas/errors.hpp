#pragma once

#include <stdexcept>
#include <string>

namespace latgas {

/// Base class for all toolkit errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Initial profile violates the constraints of the requested dynamics
/// (negative density, or rho+ + rho- > 1 for exclusion models).
struct ProfileInvalid : Error {
    using Error::Error;
};

/// Coarse-graining block radius outside [1, N/4].
struct BlockTooLarge : Error {
    using Error::Error;
};

/// Background field grid is incompatible with the lattice.
struct GridMismatch : Error {
    using Error::Error;
};

/// No closed form registered for the requested local function / measure pair.
struct UnknownClosedForm : Error {
    using Error::Error;
};

/// Noise amplitude argument outside [0,1].
struct AmplitudeDomain : Error {
    using Error::Error;
};

/// PDE step violated a state invariant or the CFL bound.
struct StepRejected : Error {
    using Error::Error;
};

/// Zero-range occupancy or rate exceeded the representable range.
struct OverflowGuard : Error {
    using Error::Error;
};

/// Two artifacts that must share parameters do not.
struct ParameterMismatch : Error {
    using Error::Error;
};

/// Root bracketing failed inside the configured search window.
struct SearchWindowExceeded : Error {
    using Error::Error;
};

} // namespace latgas
