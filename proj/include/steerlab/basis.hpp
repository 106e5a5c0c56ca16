#pragma once

// Operator bases built from SU(N) generators and the real parameter matrix
// ("theta matrix") that packages a reference/system/environment state.

#include <vector>

#include "steerlab/density.hpp"
#include "steerlab/linalg.hpp"

namespace steerlab {

/// Traceless Hermitian generators of SU(N), normalized so that
/// tr(F^a F^b) = N delta^{ab}. For N = 2 these are exactly the Pauli
/// matrices (sigma_x, sigma_y, sigma_z) in that order.
struct GeneratorBasis {
  int dim = 0;
  std::vector<ComplexMatrix> generators;

  int count() const { return static_cast<int>(generators.size()); }
  /// F^0 is the identity; F^1..F^{N^2-1} are the generators.
  ComplexMatrix element(int index) const;
};

/// Generalized Gell-Mann construction: for each pair j<k the symmetric then
/// antisymmetric off-diagonal generator, followed by the N-1 diagonal ones.
GeneratorBasis su_basis(int n);

/// Row of the theta matrix carrying the F_S^j (x) F_E^k coefficient,
/// j in 1..n_s and k in 1..n_e. Stride n_e keeps the map bijective when
/// n_s != n_e.
int corr_index(int j, int k, int n_s, int n_e);

/// Row of the theta matrix for the (S, E) basis pair (zeta, eta), each index
/// including 0 for the identity.
int theta_row(int zeta, int eta, int n_s, int n_e);

struct BasisPair {
  int s = 0;
  int e = 0;
};
BasisPair theta_row_label(int row, int n_s, int n_e);

/// Coefficients of a tripartite operator in the product generator basis.
/// entries(row, mu) = tr(rho F_R^mu (x) F_S^zeta (x) F_E^eta), where row
/// encodes (zeta, eta) via theta_row. Row 0 is therefore (1, a^T).
struct ThetaMatrix {
  int n_r = 0;
  int n_s = 0;
  int n_e = 0;
  RealMatrix entries;

  ThetaMatrix() = default;
  ThetaMatrix(int n_r, int n_s, int n_e);

  int rows() const { return static_cast<int>(entries.rows()); }
  int cols() const { return static_cast<int>(entries.cols()); }

  /// Reference Bloch-type vector a (row 0 without the leading 1).
  RealVector a() const { return entries.row(0).tail(n_r).transpose(); }
  /// Rows 1..n_s: the coefficients that steer the reduced state of S.
  RealMatrix s_block() const { return entries.middleRows(1, n_s); }

  /// e^X = Theta X for X of length n_r + 1.
  RealVector steer(const RealVector& x) const;

  int dim_r() const;
  int dim_s() const;
  int dim_e() const;
  DimList dims() const { return DimList{dim_r(), dim_s(), dim_e()}; }
};

ThetaMatrix theta_from_state(const DensityMatrix& rho);
/// Same extraction for an arbitrary (not necessarily positive) Hermitian
/// operator on R (x) S (x) E.
ThetaMatrix theta_from_operator(const ComplexMatrix& m, const DimList& dims);

/// Reassembles the operator. Positivity is not guaranteed; pass the result
/// through validate_state when a state is required.
ComplexMatrix state_from_theta(const ThetaMatrix& theta);

}  // namespace steerlab
