#pragma once

#include <stdexcept>
#include <string>

namespace tfg {

/// Base of every error thrown by the library. The CLI maps the subclasses
/// onto exit codes (verification failure, resource cap, bad input).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class ConflictError : public Error {
public:
    using Error::Error;
};

class UnknownSymbol : public Error {
public:
    using Error::Error;
};

/// An enumeration, word or precision budget was exhausted.
class ResourceCap : public Error {
public:
    using Error::Error;
};

/// Interval refinement reached its bit limit without separating two values.
class PrecisionCap : public ResourceCap {
public:
    using ResourceCap::ResourceCap;
};

class OverlapError : public Error {
public:
    using Error::Error;
};

class HypothesisViolation : public Error {
public:
    using Error::Error;
};

class PreconditionViolation : public Error {
public:
    using Error::Error;
};

class InadmissibleWindow : public Error {
public:
    using Error::Error;
};

class NotAThreeCycle : public Error {
public:
    using Error::Error;
};

class GridObstruction : public Error {
public:
    using Error::Error;
};

class BadInput : public Error {
public:
    using Error::Error;
};

/// Result marker for searches that stopped at their cap (not an error).
struct ExceedsCap {
    int cap;
};

}  // namespace tfg
