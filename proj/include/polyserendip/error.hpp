#pragma once

#include <stdexcept>
#include <string>

namespace polyserendip {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or out-of-contract input (bad indices, non-convex polygon, bad file).
class InvalidInput : public Error {
public:
    using Error::Error;
};

/// Geometry that is valid input but cannot be handled (zero area, collinear fan).
class GeometryError : public Error {
public:
    using Error::Error;
};

/// Interior-only formula asked for a point on or outside the boundary.
class BoundaryEvaluationError : public Error {
public:
    using Error::Error;
};

/// The serendipity reduction could not be formed for this polygon (e.g. s blows up).
class ConstructionError : public Error {
public:
    using Error::Error;
};

} // namespace polyserendip
