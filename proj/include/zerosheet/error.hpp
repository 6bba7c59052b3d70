#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace zerosheet {

/// Base of every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class PgmError : public Error {
 public:
  enum class Kind { kMalformedHeader, kTruncatedData, kUnsupportedFormat, kIo };

  PgmError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

/// Slice polynomial vanished below the trim threshold at the sample point.
class DegenerateSlice : public Error {
 public:
  using Error::Error;
};

/// Carries the coefficients of the slice that failed to converge.
class RootFindingFailure : public Error {
 public:
  RootFindingFailure(const std::string& what, std::vector<std::complex<double>> coeffs)
      : Error(what), coeffs_(std::move(coeffs)) {}
  const std::vector<std::complex<double>>& coefficients() const noexcept { return coeffs_; }

 private:
  std::vector<std::complex<double>> coeffs_;
};

/// n < 2 along the v axis; the caller must search along u instead.
class AxisError : public Error {
 public:
  using Error::Error;
};

class SamplingFailure : public Error {
 public:
  using Error::Error;
};

class TrackingError : public Error {
 public:
  enum class Kind { kCountMismatch, kCollision, kAmbiguous, kDegeneratePath };

  TrackingError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

class LinearAlgebraError : public Error {
 public:
  using Error::Error;
};

class DegenerateCandidate : public Error {
 public:
  using Error::Error;
};

/// Blur spectrum too close to zero on the DFT grid for division.
class DivisionUnstable : public Error {
 public:
  using Error::Error;
};

class DegenerateBlur : public Error {
 public:
  using Error::Error;
};

}  // namespace zerosheet
