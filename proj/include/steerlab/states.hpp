#pragma once

// Construction of reference/system/environment (R, S, E) three-qubit states.

#include <cstdint>

#include "steerlab/basis.hpp"
#include "steerlab/density.hpp"
#include "steerlab/random.hpp"

namespace steerlab {

inline const DimList kThreeQubits{2, 2, 2};

/// Haar-distributed n x n unitary: QR of a complex Ginibre matrix with the
/// phases of R's diagonal folded back into Q.
ComplexMatrix haar_unitary(int n, Rng& rng);

struct GenerationConfig {
  std::uint64_t seed = 1;
  double min_pair_concurrence = 0.05;  // for both RS and RE
  double max_se_concurrence = 1e-6;
  int max_attempts = 10000;

  void validate() const;
};

struct GenerationDiagnostics {
  double c_rs = 0.0;
  double c_re = 0.0;
  double c_se = 0.0;
  int attempts = 0;
  // candidates rejected because rho_R was too close to singular
  int singular_rejections = 0;
};

struct GeneratedState {
  DensityMatrix rho;
  GenerationDiagnostics diagnostics;
};

class GenerationError : public std::runtime_error {
 public:
  GenerationError(const std::string& what, int attempts)
      : std::runtime_error(what), attempts_(attempts) {}
  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

/// Random three-qubit state with RS and RE entanglement and a separable SE
/// marginal, in the canonical gauge rho_R = 1/2. Candidates are
/// U_RE U_RS |abc><abc| U_RS^dag U_RE^dag for a random basis state and Haar
/// two-qubit unitaries, canonicalized, then accepted by concurrence
/// thresholds. Throws GenerationError when max_attempts is exhausted.
GeneratedState gen_pairwise_entangled(const GenerationConfig& cfg);
GeneratedState gen_pairwise_entangled(const GenerationConfig& cfg, Rng& rng);

inline constexpr double kSloccRankFloor = 1e-8;

/// Applies (2 rho_R)^{-1/2} (x) 1_SE and renormalizes, making the reference
/// marginal maximally mixed (R must be a qubit). Throws LinalgError when
/// rho_R has an eigenvalue at or below kSloccRankFloor.
DensityMatrix slocc_canonicalize(const DensityMatrix& rho);

/// Random full-rank state with Hilbert-Schmidt measure (G G^dag / tr, G
/// complex Ginibre).
DensityMatrix random_state(const DimList& dims, Rng& rng);

/// Random pure state on the given factors.
DensityMatrix random_pure_state(const DimList& dims, Rng& rng);

/// Random three-qubit state in the canonical gauge rho_R = 1/2.
DensityMatrix random_canonical_state(Rng& rng);

/// rho_RS (x) rho_E with random factors, canonicalized: a short Markov chain
/// with I(R:E|S) = 0.
DensityMatrix random_markov_state(Rng& rng);

/// Theta matrix of the three-parameter family: e1 = e3 = P, e5 = Q,
/// e8 = e14 = PQ and T_{r,i} = T for r in {2, 5, 8, 14}, i = 1..3.
ThetaMatrix pqt_theta(double p, double q, double t);

/// The state of pqt_theta. Throws StateError (carrying the minimum
/// eigenvalue) when the parameters do not give a positive operator.
DensityMatrix pqt_state(double p, double q, double t);

}  // namespace steerlab
