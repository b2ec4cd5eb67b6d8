#pragma once

#include <stdexcept>
#include <string>

namespace cagt {

/// Shapes, bases or degrees do not fit together.
struct StructuralError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Degenerate or irrational geometry where exact geometry is required.
struct GeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A requested block depends on data cut off by the truncation.
struct IndeterminateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The perturbation series cannot be certified to converge.
struct ConvergenceGateError : std::runtime_error {
  ConvergenceGateError(const std::string& what, double bound) : std::runtime_error(what), ratio(bound) {}
  double ratio;
};

/// Polynomial degree exceeded the configured cap.
struct DegreeCapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A theorem hypothesis (e.g. [H, c(g)] = 0) does not hold for the inputs.
struct HypothesisViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cagt
