#pragma once

#include <exception>
#include <string>

namespace thinhom {

/// Base of every error raised by the library. The message is prefixed with
/// the name of the module that raised it, e.g. "mesh: triangle cap exceeded".
class Error : public std::exception {
 public:
  Error(std::string module, std::string detail)
      : module_(std::move(module)), detail_(std::move(detail)) {
    rebuild();
  }

  const char* what() const noexcept override { return full_.c_str(); }
  const std::string& module() const noexcept { return module_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Adds context in front of the detail, keeping the module prefix.
  void prepend(const std::string& context) {
    detail_ = context + detail_;
    rebuild();
  }

 private:
  void rebuild() { full_ = module_ + ": " + detail_; }

  std::string module_;
  std::string detail_;
  std::string full_;
};

/// Argument outside the domain of a function (x outside [0,1], ...).
class DomainError : public Error {
  using Error::Error;
};

/// Inconsistent or invalid configuration (bad spec, epsilon too large, ...).
class ConfigError : public Error {
  using Error::Error;
};

/// A hypothesis required by an operation does not hold.
class PreconditionError : public Error {
  using Error::Error;
};

/// A resource cap (triangle count, quadrature size) would be exceeded.
class ResourceError : public Error {
  using Error::Error;
};

/// Invalid or non-conforming mesh.
class MeshError : public Error {
  using Error::Error;
};

/// Iterative method failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  ConvergenceError(std::string module, const std::string& what, double residual)
      : Error(std::move(module), what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Singular or otherwise broken linear system.
class NumericError : public Error {
  using Error::Error;
};

}  // namespace thinhom
