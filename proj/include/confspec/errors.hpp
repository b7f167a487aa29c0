#pragma once

#include <stdexcept>
#include <string>

namespace confspec {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A point lies outside the admissible region of a conformal factor model.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The domain comes closer than one grid cell to the chart's singular set.
class MarginError : public Error {
 public:
  using Error::Error;
};

/// The grid spacing is too coarse to place a single interior node.
class EmptyGridError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, int iterations, double worst_residual)
      : Error(what), iterations_(iterations), worst_residual_(worst_residual) {}

  int iterations() const noexcept { return iterations_; }
  double worst_residual() const noexcept { return worst_residual_; }

 private:
  int iterations_;
  double worst_residual_;
};

/// The stiffness matrix failed to factor with positive pivots.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// A half-space quantity was requested on a domain outside the half-space chart.
class ChartError : public Error {
 public:
  using Error::Error;
};

/// An integral-based checker was handed a result computed on the wrong model.
class ModelMismatch : public Error {
 public:
  using Error::Error;
};

class IndexError : public Error {
 public:
  using Error::Error;
};

/// The quadratic behind a next-eigenvalue bound has no real root.
class NoRealRoot : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : Error("config field '" + field + "': " + what), field_(field) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace confspec
