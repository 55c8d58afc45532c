#pragma once

#include <stdexcept>
#include <string>

namespace kdv {

/// Mismatched lengths or grids between operands.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Physical sample count too small to represent the band without aliasing.
class AliasingError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A multiplier was evaluated off its domain (e.g. frequencies not summing to zero).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// M4 failed to vanish on a resonant quadruple where sigma4 would divide by zero.
class CancellationViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trajectory produced a non-finite amplitude or lost its zero mean.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, double t, double norm)
      : std::runtime_error(what), t_(t), norm_(norm) {}

  double time() const noexcept { return t_; }
  double norm() const noexcept { return norm_; }

 private:
  double t_;
  double norm_;
};

/// Invalid run configuration; the message names the key and the violated constraint.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace kdv
