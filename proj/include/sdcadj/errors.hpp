#pragma once

#include <stdexcept>
#include <string>

namespace sdcadj {

/// Bad input to a public entry point (empty ranges, non-positive sizes, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Newton did not converge inside an implicit substep.
class IterationFailure : public std::runtime_error {
 public:
  IterationFailure(int interval, int subnode, double residual)
      : std::runtime_error("implicit substep did not converge at interval " +
                           std::to_string(interval) + ", subnode " + std::to_string(subnode) +
                           " (residual " + std::to_string(residual) + ")"),
        interval_(interval),
        subnode_(subnode),
        residual_(residual) {}

  int interval() const noexcept { return interval_; }
  int subnode() const noexcept { return subnode_; }
  double residual() const noexcept { return residual_; }

 private:
  int interval_;
  int subnode_;
  double residual_;
};

/// A linear system or root solve that should be well posed was not.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The reference solution failed its self-consistency gate.
class ReferenceUnreliable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Effectivity requested for an estimate that is numerically zero.
class DegenerateRatio : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace sdcadj
