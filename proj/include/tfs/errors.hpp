#pragma once

#include <stdexcept>
#include <string>

namespace tfs {

// All library failures derive from Error so callers can catch one type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
public:
    using Error::Error;
};

class InvalidNode : public Error {
public:
    using Error::Error;
};

class NotAnEdge : public Error {
public:
    using Error::Error;
};

class MissingOrbitWeight : public Error {
public:
    using Error::Error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class PreconditionViolation : public Error {
public:
    using Error::Error;
};

class NumericalFailure : public Error {
public:
    using Error::Error;
};

class PoleProximity : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

class InsufficientSignal : public Error {
public:
    using Error::Error;
};

} // namespace tfs
