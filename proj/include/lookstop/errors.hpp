#pragma once

#include <stdexcept>
#include <string>

namespace lookstop {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition violation on a caller-supplied argument.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// A lag or floor does not land on the time grid.
class GridMismatchError : public Error {
public:
    using Error::Error;
};

/// Request exceeds a configured resource cap (tree depth, rule enumeration size).
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

/// Regression or linear algebra failed (rank deficiency, non-finite result).
class NumericalError : public Error {
public:
    using Error::Error;
};

/// Non-finite values encountered in input data.
class DataError : public Error {
public:
    using Error::Error;
};

}  // namespace lookstop
