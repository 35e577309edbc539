#pragma once

#include <stdexcept>
#include <string>

namespace loadstab {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameter or out-of-domain argument (bad intensity, negative
/// radius, probability outside [0,1], ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Matrix/vector dimension mismatch, including non-square inputs.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed or non-finite data: NaN/Inf entries, empty spectra, bad files.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Numerical failure: eigensolver non-convergence, root not bracketed,
/// rate estimation on a non-convergent trajectory.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Trajectory left the admissible region (non-finite state).
class DivergenceError : public NumericError {
 public:
  DivergenceError(const std::string& what, double time)
      : NumericError(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

/// A capacity coordinate reached the singularity floor; the vector field
/// divides by it and cannot be evaluated.
class SingularityError : public NumericError {
 public:
  SingularityError(const std::string& what, double time)
      : NumericError(what), time_(time) {}
  double time() const { return time_; }

 private:
  double time_;
};

}  // namespace loadstab
