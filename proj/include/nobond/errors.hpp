#pragma once

#include <stdexcept>
#include <string>

namespace nobond {

// Base class for everything this library throws on bad inputs or failed
// numerics.  The CLI maps any Error to exit code 1; usage problems exit 2.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Model parameters outside their admissible domain (alpha <= |beta|, Y >= 2, ...).
struct InvalidModel : Error { using Error::Error; };

// Characteristic function evaluated outside its analyticity strip.
struct DomainError : Error { using Error::Error; };

// A required exponential moment E[e^{kappa L}] does not exist.
struct MomentExplosion : Error { using Error::Error; };

// NaN/inf or otherwise unusable numeric input.
struct NonFiniteInput : Error { using Error::Error; };

// Bad solver/grid configuration (non power-of-two FFT size, n_terms < 16, ...).
struct ConfigError : Error { using Error::Error; };

// Requested strike/point lies outside the supported grid or truncation range.
struct RangeError : Error { using Error::Error; };

// Adaptive quadrature failed to converge or its truncation never stabilised.
struct QuadratureFailure : Error { using Error::Error; };

// sigma_S == sigma_Z (or within the configured floor): shadow rate undefined.
struct DegenerateSpec : Error { using Error::Error; };

// Fewer observations than the estimator needs.
struct InsufficientData : Error { using Error::Error; };

// Paired series disagree on calendar/length in a way that cannot be repaired.
struct MisalignedSeries : Error { using Error::Error; };

// Date join between two series is empty.
struct EmptyIntersection : Error { using Error::Error; };

// Lattice replication determinant R == 0: one-period market is degenerate.
struct ZeroGrowthFactor : Error { using Error::Error; };

// Risk-neutral weight q undefined: (D~-D) == (U~-U) for the step.
struct DegenerateStep : Error { using Error::Error; };

// Bushy (per-step moves) lattice deeper than the configured cap.
struct DepthExceeded : Error { using Error::Error; };

// Implicit-equation solver found no sign change / non-monotone setup.
struct NoRoot : Error { using Error::Error; };

// Finite-difference step failed its h-scaling self check (round-off floor).
struct StepTooSmall : Error { using Error::Error; };

// Finite-difference step failed its h-scaling self check (truncation regime).
struct StepTooLarge : Error { using Error::Error; };

// Malformed CSV/JSON input; message carries row/column context.
struct ParseError : Error { using Error::Error; };

// Option chain with no usable quotes.
struct EmptyChain : Error { using Error::Error; };

// Filesystem problem (missing file, unwritable output).
struct IoError : Error { using Error::Error; };

// "Should never happen" consistency failures (e.g. large negative FFT price).
struct InternalError : Error { using Error::Error; };

} // namespace nobond
