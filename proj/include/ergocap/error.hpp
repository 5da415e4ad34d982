#pragma once

#include <stdexcept>
#include <string>

namespace ergocap {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An operation was called outside its documented precondition
/// (non-invariant capacity, non-invertible map, width mismatch, ...).
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// No element of the core satisfies the requested restriction.
class EmptyRestrictedCore : public Error {
public:
    using Error::Error;
};

/// A constructed object failed the postcondition it is supposed to satisfy
/// by construction. Seeing this means a bug, not bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

/// Malformed or inconsistent input data (CLI files, rational literals).
class InputError : public Error {
public:
    using Error::Error;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition) throw PreconditionError(message);
}

} // namespace ergocap
