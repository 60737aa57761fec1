#pragma once

#include <stdexcept>
#include <string>

namespace steinlab {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation (beta outside
/// (1/2, 1), negative degree, empty sample, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The operation belongs to the other limit regime (CLT vs NCLT).
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// q(2 beta - 1) == 1: neither regime is defined there.
class BoundaryError : public RegimeError {
 public:
  using RegimeError::RegimeError;
};

/// Lag or index beyond what a table stores.
class RangeError : public Error {
 public:
  using Error::Error;
};

/// A computation could not be carried out to the requested accuracy.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// The truncation length needed for a tolerance exceeds the memory cap.
class TruncationOverflow : public NumericError {
 public:
  using NumericError::NumericError;
};

/// A counter-based random stream ran out of counters.
class StreamExhausted : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace steinlab
