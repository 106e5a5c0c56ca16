#pragma once

#include <cmath>

#include "steerlab/experiments.hpp"

namespace testing {

using namespace steerlab;

inline ComplexMatrix random_hermitian(int n, Rng& rng) {
  ComplexMatrix g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double re = rng.normal();
      g(r, c) = cplx(re, rng.normal());
    }
  return 0.5 * (g + g.adjoint());
}

inline ComplexMatrix random_matrix(int n, Rng& rng) {
  ComplexMatrix g(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const double re = rng.normal();
      g(r, c) = cplx(re, rng.normal());
    }
  return g;
}

inline ComplexVector bell_phi_plus() {
  ComplexVector v = ComplexVector::Zero(4);
  v(0) = v(3) = 1.0 / std::sqrt(2.0);
  return v;
}

inline ComplexVector singlet() {
  ComplexVector v = ComplexVector::Zero(4);
  v(1) = 1.0 / std::sqrt(2.0);
  v(2) = -1.0 / std::sqrt(2.0);
  return v;
}

inline ComplexVector basis_ket(int n, int i) {
  ComplexVector v = ComplexVector::Zero(n);
  v(i) = 1.0;
  return v;
}

inline ComplexVector ghz() {
  ComplexVector v = ComplexVector::Zero(8);
  v(0) = v(7) = 1.0 / std::sqrt(2.0);
  return v;
}

inline DensityMatrix bell_rs_with(const ComplexMatrix& e) {
  return DensityMatrix(kron(projector(bell_phi_plus()), e), kThreeQubits);
}

inline ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

// Steered-then-evolved S state from full matrices only.
inline ComplexMatrix oracle_evolved_s(const DensityMatrix& rho, const ComplexMatrix& u,
                                      const SteeringOperator& x) {
  const ComplexMatrix e = kron({x.op(2), ComplexMatrix::Identity(4, 4)});
  const ComplexMatrix weighted = e * rho.matrix();
  ComplexMatrix se = partial_trace(weighted, kThreeQubits, {1, 2});
  se /= se.trace();
  return partial_trace(u * se * u.adjoint(), DimList{2, 2}, {0});
}

}  // namespace testing
