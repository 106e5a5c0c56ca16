#pragma once

// Dense complex linear algebra for small quantum systems (total dimension
// at most a few dozen). Everything here is a pure function over values.

#include <complex>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace steerlab {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdTol = 1e-9;
// Eigenvalues in [-kEigenFloor, 0) are treated as roundoff and clipped.
inline constexpr double kEigenFloor = 1e-9;

class LinalgError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public LinalgError {
 public:
  using LinalgError::LinalgError;
};

/// Ordered tensor-factor dimensions of a composite Hilbert space.
class DimList {
 public:
  DimList() = default;
  DimList(std::initializer_list<int> dims);
  explicit DimList(std::vector<int> dims);

  const std::vector<int>& dims() const { return dims_; }
  std::size_t size() const { return dims_.size(); }
  int operator[](std::size_t i) const { return dims_.at(i); }
  int total() const;

  bool operator==(const DimList&) const = default;

 private:
  std::vector<int> dims_;
};

struct EigenDecomposition {
  RealVector values;  // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

// Throws LinalgError if any entry is NaN or infinite.
void require_finite(const ComplexMatrix& m, const char* what);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors);

/// Trace over every factor not listed in `keep`. Kept factors retain their
/// relative order in the result.
ComplexMatrix partial_trace(const ComplexMatrix& m, const DimList& dims,
                            const std::vector<int>& keep);

/// Transpose of one tensor factor.
ComplexMatrix partial_transpose(const ComplexMatrix& m, const DimList& dims,
                                int factor);

double hermiticity_defect(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);

EigenDecomposition herm_eig(const ComplexMatrix& m);
RealVector herm_eigenvalues(const ComplexMatrix& m);

/// V f(diag) V^dagger. `f` may throw to signal that it is undefined at an
/// eigenvalue.
ComplexMatrix apply_herm_func(const ComplexMatrix& m,
                              const std::function<double(double)>& f);

/// (m)^{-1/2} for a positive definite Hermitian matrix. Eigenvalues at or
/// below `floor` raise LinalgError.
ComplexMatrix inverse_sqrt(const ComplexMatrix& m, double floor);

bool is_psd(const ComplexMatrix& m, double tol = kPsdTol);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
/// index 0 is the identity, 1..3 are sigma_x, sigma_y, sigma_z.
ComplexMatrix sigma(int index);
}  // namespace pauli

ComplexMatrix projector(const ComplexVector& psi);

}  // namespace steerlab
