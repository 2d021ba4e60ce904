#pragma once

#include <stdexcept>
#include <string>

namespace lpoc {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A precondition on an operation's inputs was violated (dimension
/// mismatches, non-group matrices, invalid parameters).
struct ContractViolation : Error {
    using Error::Error;
};

/// vee() was asked to project a matrix that is not in the span of the basis.
struct OutOfAlgebra : Error {
    using Error::Error;
};

/// The Cayley map (or its tangent) hit a numerically singular linear solve.
struct SingularRetraction : Error {
    using Error::Error;
};

/// tau_inv() was evaluated outside the injectivity neighborhood of the
/// retraction (e.g. a rotation of angle >= pi under the exponential map).
struct OutsideInjectivityDomain : Error {
    using Error::Error;
};

/// The Legendre relation could not be inverted.
struct LegendreSingular : Error {
    using Error::Error;
};

/// The k/p subspace bracket relations required by the split equations fail.
struct SplittingViolated : Error {
    using Error::Error;
};

/// The advected parameter reached (or started too close to) the barrier
/// singular set.
struct BarrierSingular : Error {
    using Error::Error;
};

/// The implicit per-step solve did not reach tolerance.
struct NewtonDivergence : Error {
    using Error::Error;
};

/// The shooting loop ran out of iterations.
struct MaxItersExceeded : Error {
    using Error::Error;
};

}  // namespace lpoc
