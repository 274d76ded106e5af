#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace torusrw {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// No basepoint keeps the embedded set at distance >= 1 from the box boundary.
class MarginTooSmall : public Error {
 public:
  using Error::Error;
};

class SolverDiverged : public Error {
 public:
  using Error::Error;
};

class EmptyTarget : public Error {
 public:
  using Error::Error;
};

class TooLarge : public Error {
 public:
  using Error::Error;
};

class NonAdjacentEdge : public Error {
 public:
  using Error::Error;
};

class SupportsOverlap : public Error {
 public:
  using Error::Error;
};

class DegenerateNormalizer : public Error {
 public:
  using Error::Error;
};

/// A flow or field fails a feasibility constraint. Carries the worst point.
class ConstraintViolated : public Error {
 public:
  ConstraintViolated(const std::string& what, std::string worst_point, double violation)
      : Error(what + " (worst at " + worst_point + ", violation " + std::to_string(violation) + ")"),
        worst_point_(std::move(worst_point)),
        violation_(violation) {}

  const std::string& worst_point() const { return worst_point_; }
  double violation() const { return violation_; }

 private:
  std::string worst_point_;
  double violation_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace torusrw
