#pragma once

#include <stdexcept>
#include <string>

namespace efstein {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Two functions (or a function and an operator) live on different
/// complexes or different home subsets.
struct DomainMismatch : Error {
    using Error::Error;
};

/// A partial assignment points outside the support of the marginal.
struct ZeroMassPoint : Error {
    using Error::Error;
};

/// Malformed measure: bad weight sum, duplicate faces, empty support, ...
struct InvalidMeasure : Error {
    using Error::Error;
};

/// Truncation degree d is smaller than |S|.
struct DegreeTooSmall : Error {
    using Error::Error;
};

/// A check that requires (d,delta)-globalness was called on a function
/// that is not (d,delta)-global.
struct NotGlobal : Error {
    using Error::Error;
};

/// A check that requires a Boolean (0/1-valued) function got something else.
struct NotBoolean : Error {
    using Error::Error;
};

/// delta exceeds the threshold required by the shadow bound.
struct PreconditionDelta : Error {
    using Error::Error;
};

/// An approximate-decomposition component has no witness h_S.
struct MissingWitness : Error {
    using Error::Error;
};

/// A perturbation drove a weight to zero or below.
struct NegativeWeight : Error {
    using Error::Error;
};

/// run_suite was asked for a suite that does not exist.
struct UnknownSuite : Error {
    using Error::Error;
};

}  // namespace efstein
