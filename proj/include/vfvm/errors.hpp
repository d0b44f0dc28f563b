// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace vfvm {

/// Base class of every exception thrown by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Simplex too flat for a circumcenter solve (scaled determinant below threshold).
struct DegenerateSimplex : Error { using Error::Error; };

/// Mesh text input could not be parsed; message carries the line number.
struct ParseError : Error { using Error::Error; };

/// Mesh failed a structural invariant (indices, orientation, duplicates, facets).
struct InvalidMesh : Error { using Error::Error; };

/// Boundary repair exceeded its insertion budget.
struct RepairDiverged : Error { using Error::Error; };

/// Boundary condition references a tag with no boundary facets / measures.
struct MissingBoundaryMeasure : Error { using Error::Error; };

/// Direct factorization hit a zero pivot.
struct SingularMatrix : Error { using Error::Error; };

/// Iterative solve did not reach its tolerance within max_iter.
struct NotConverged : Error { using Error::Error; };

/// Newton linear system factorization hit a zero pivot.
struct SingularJacobian : Error { using Error::Error; };

/// Newton iteration failed (max_iter, non-finite residual, or singular Jacobian).
struct NewtonFailure : Error { using Error::Error; };

/// Argument outside the admissible open interval (e.g. u outside (0,1)).
struct OutOfBounds : Error { using Error::Error; };

/// Converged time step left the admissible region; caller should shrink tau.
struct BoundsViolation : Error { using Error::Error; };

/// Adaptive stepper hit tau_min twice in a row.
struct StepFloorReached : Error { using Error::Error; };

/// Bad key or value in a run configuration file; message names the key.
struct ConfigError : Error { using Error::Error; };

}  // namespace vfvm
