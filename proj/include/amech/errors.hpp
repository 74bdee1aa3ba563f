#pragma once

#include <stdexcept>
#include <string>

namespace amech {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A user field returned NaN or infinity. `index()` is the coordinate being
/// perturbed when it happened (-1 for an unperturbed evaluation).
class NonFiniteField : public Error {
 public:
  explicit NonFiniteField(int index, const std::string& where = "field")
      : Error(where + ": non-finite value (coordinate index " + std::to_string(index) + ")"),
        index_(index) {}
  int index() const noexcept { return index_; }

 private:
  int index_;
};

class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Fiber Hessian not invertible within the configured condition bound.
class SingularHessian : public Error {
 public:
  explicit SingularHessian(double condition)
      : Error("singular fiber Hessian (condition estimate " + std::to_string(condition) + ")"),
        condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

class NoConvergence : public Error {
 public:
  NoConvergence(int iterations, double residual)
      : Error("Newton iteration did not converge after " + std::to_string(iterations) +
              " iterations (residual " + std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual) {}
  int iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }

 private:
  int iterations_;
  double residual_;
};

class PreconditionFailed : public Error {
 public:
  using Error::Error;
};

class InvalidMetric : public Error {
 public:
  using Error::Error;
};

class UnknownChannel : public Error {
 public:
  explicit UnknownChannel(const std::string& name) : Error("unknown monitor channel '" + name + "'") {}
};

/// Malformed model or scenario input (CLI exit code 2).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace amech
