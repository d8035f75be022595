#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cellprobe {

// Base of every error raised by the library. Each subclass names the
// contract that was violated so callers (and the CLI) can map it to an
// exit status.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input outside the domain of an operation (x not in the scheme domain,
// unbalanced brackets, empty sets).
class DomainError : public Error {
public:
    using Error::Error;
};

// Query or cell index out of range.
class RangeError : public Error {
public:
    using Error::Error;
};

// Parameters that violate an operation's preconditions.
class ParameterError : public Error {
public:
    using Error::Error;
};

// A cell alphabet too small to hold what a scheme must store.
class CapacityError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

// A (B, z, X) fixing where some x in X does not agree with z on B.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

// An exhaustive computation that would exceed its work budget.
class SizeError : public Error {
public:
    SizeError(const std::string& what, std::size_t count)
        : Error(what), count_(count) {}
    std::size_t count() const noexcept { return count_; }

private:
    std::size_t count_;
};

// A lemma hypothesis measured on the input and found not to hold.
class HypothesisError : public Error {
public:
    HypothesisError(const std::string& what, double measured, double required)
        : Error(what), measured_(measured), required_(required) {}
    double measured() const noexcept { return measured_; }
    double required() const noexcept { return required_; }

private:
    double measured_;
    double required_;
};

// Malformed scheme / distribution / index files.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace cellprobe
