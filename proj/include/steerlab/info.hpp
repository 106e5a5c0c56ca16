#pragma once

// Entropic and entanglement diagnostics. All entropies are in bits.

#include <vector>

#include "steerlab/density.hpp"

namespace steerlab {

/// -sum lambda log2 lambda with 0 log 0 = 0. Eigenvalues in [-1e-9, 0) are
/// clipped; anything more negative throws LinalgError.
double vn_entropy(const DensityMatrix& rho);
double vn_entropy(const ComplexMatrix& m);

struct Bipartition {
  std::vector<int> a;
  std::vector<int> b;
};

/// I(A:B) = S(A) + S(B) - S(AB) on the reduced state of A u B.
double mutual_info(const DensityMatrix& rho, const Bipartition& parts);

/// I(R:E|S) = S(RS) + S(SE) - S(S) - S(RSE) for a state on R (x) S (x) E.
double cond_mutual_info(const DensityMatrix& rho);

struct InfoReport {
  double cmi = 0.0;        // I(R:E|S) of the initial state
  double mi_before = 0.0;  // I(R:S)
  double mi_after = 0.0;   // I(R:S')
  double nu = 0.0;         // max(0, mi_after - mi_before)

  double raw_gain() const { return mi_after - mi_before; }
};

/// Evolves with 1_R (x) U on S (x) E and reports the data-processing
/// violation of I(R:S).
InfoReport dpi_violation(const DensityMatrix& rho, const ComplexMatrix& u_se);

/// Same report when the evolved state is already available.
InfoReport dpi_violation(const DensityMatrix& rho, const DensityMatrix& evolved);

/// Wootters concurrence of a two-qubit state.
double concurrence(const DensityMatrix& rho);

/// Minimum eigenvalue of the partial transpose on the second qubit.
double partial_transpose_min_eig(const DensityMatrix& rho);

/// Peres-Horodecki test, exact for two qubits.
bool ppt_separable(const DensityMatrix& rho);

}  // namespace steerlab
