#pragma once

#include <stdexcept>
#include <string>

namespace simplexwave {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DegenerateSimplex : public Error {
public:
    using Error::Error;
};

class DimMismatch : public Error {
public:
    using Error::Error;
};

class NotSymmetric : public Error {
public:
    using Error::Error;
};

class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

class DegreeCapExceeded : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

class EmptyInterior : public Error {
public:
    using Error::Error;
};

class BoundaryViolation : public Error {
public:
    using Error::Error;
};

class CflViolation : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class NonBoundaryFacet : public Error {
public:
    using Error::Error;
};

class OutOfOrderSample : public Error {
public:
    using Error::Error;
};

class ZeroEnergy : public Error {
public:
    using Error::Error;
};

class RepeatedMode : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace simplexwave
