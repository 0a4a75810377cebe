#pragma once

#include <stdexcept>
#include <string>

namespace qsl {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Matrix/vector shapes are incompatible for the requested operation.
struct DimensionMismatch : Error {
    using Error::Error;
};

// A matrix expected to be Hermitian fails the symmetry check.
struct NotHermitian : Error {
    using Error::Error;
};

// A matrix expected to be an orthogonal projector fails the
// Hermitian-idempotent or integer-trace check.
struct NotProjector : Error {
    using Error::Error;
};

// An iterative routine failed to meet its tolerance within the cap.
struct NonConvergence : Error {
    using Error::Error;
};

// A state vector expected to be normalized is not.
struct NonUnitInput : Error {
    using Error::Error;
};

// A spanning set contains no vectors.
struct EmptySpan : Error {
    using Error::Error;
};

// An operation requires a subspace of dimension >= 1.
struct EmptySubspace : Error {
    using Error::Error;
};

// An operation requires a proper nontrivial subspace.
struct TrivialSubspace : Error {
    using Error::Error;
};

// An eigenvalue/index selection is out of range.
struct IndexOutOfRange : Error {
    using Error::Error;
};

// A scenario requires distinct energy levels.
struct DegenerateLevels : Error {
    using Error::Error;
};

// A target angle lies outside (0, pi/2].
struct InvalidTheta : Error {
    using Error::Error;
};

// A computed quantity breaks one of the proven inequalities beyond
// tolerance.  This signals a software defect, not a physics result.
struct BoundViolation : Error {
    using Error::Error;
};

// Configuration file could not be parsed or validated.
struct ConfigError : Error {
    explicit ConfigError(const std::string& what, int line = 0)
        : Error(what), line(line) {}
    int line = 0;
};

// Filesystem access failed.
struct IoError : Error {
    using Error::Error;
};

}
