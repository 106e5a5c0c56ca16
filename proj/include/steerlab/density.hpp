#pragma once

#include <optional>
#include <string>
#include <vector>

#include "steerlab/linalg.hpp"

namespace steerlab {

inline constexpr double kTraceTol = 1e-10;

struct Violation {
  std::string invariant;  // "shape", "finite", "hermitian", "trace", "psd"
  double magnitude = 0.0;
  std::string detail;
};

class StateError : public std::runtime_error {
 public:
  StateError(const std::string& what, std::vector<Violation> violations)
      : std::runtime_error(what), violations_(std::move(violations)) {}
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::vector<Violation> violations_;
};

struct ValidationResult;

/// A Hermitian, unit-trace, positive semidefinite operator annotated with
/// its tensor-factor dimensions. The constructor checks every invariant and
/// throws StateError on violation.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix mat, DimList dims);

  const ComplexMatrix& matrix() const { return mat_; }
  const DimList& dims() const { return dims_; }
  int dim() const { return static_cast<int>(mat_.rows()); }

  /// Reduced state on the listed factors.
  DensityMatrix reduce(const std::vector<int>& keep) const;

 private:
  struct Unchecked {};
  DensityMatrix(Unchecked, ComplexMatrix mat, DimList dims)
      : mat_(std::move(mat)), dims_(std::move(dims)) {}
  friend struct ValidationResult;
  friend ValidationResult validate_state(const ComplexMatrix&, const DimList&);

  ComplexMatrix mat_;
  DimList dims_;
};

struct ValidationResult {
  std::optional<DensityMatrix> state;
  std::vector<Violation> violations;

  bool ok() const { return state.has_value(); }
  std::string summary() const;
};

ValidationResult validate_state(const ComplexMatrix& m, const DimList& dims);

/// Maximally mixed state on the given factors.
DensityMatrix maximally_mixed(const DimList& dims);

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace steerlab
