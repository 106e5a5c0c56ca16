#pragma once

// Joint unitary evolution of S and E and its action on the theta matrix.

#include <vector>

#include "steerlab/basis.hpp"
#include "steerlab/density.hpp"

namespace steerlab {

inline constexpr double kUnitaryTol = 1e-10;

/// Real coefficients of U (F_S^zeta (x) F_E^eta) U^dag in the product basis:
/// sum_{alpha,beta} u(zeta, eta, alpha, beta) F_S^alpha (x) F_E^beta.
class UCoeffs {
 public:
  UCoeffs(int n_s, int n_e);

  int n_s() const { return n_s_; }
  int n_e() const { return n_e_; }

  double operator()(int zeta, int eta, int alpha, int beta) const {
    return data_[index(zeta, eta, alpha, beta)];
  }
  double& operator()(int zeta, int eta, int alpha, int beta) {
    return data_[index(zeta, eta, alpha, beta)];
  }

 private:
  std::size_t index(int zeta, int eta, int alpha, int beta) const {
    const std::size_t ps = n_s_ + 1, pe = n_e_ + 1;
    return ((static_cast<std::size_t>(zeta) * pe + eta) * ps + alpha) * pe + beta;
  }
  int n_s_;
  int n_e_;
  std::vector<double> data_;
};

double unitarity_defect(const ComplexMatrix& u);

/// Hilbert-Schmidt projection of each conjugated basis element. Throws
/// LinalgError if U is not unitary within kUnitaryTol.
UCoeffs u_coeffs(const ComplexMatrix& u, int dim_s, int dim_e);

/// Rows 1..n_s of the evolved theta matrix:
///   Theta~_{j,mu} = u^{l0}_{j0} Theta_{l,mu} + u^{0k}_{j0} Theta_{n_s+k,mu}
///                 + u^{lk}_{j0} Theta_{corr(l,k),mu}.
/// The steered S state after evolution is (1/N_S)[1 + Theta~_{j,mu} X_mu F^j].
RealMatrix evolve_theta(const ThetaMatrix& theta, const UCoeffs& u);

/// (1_R (x) U) rho (1_R (x) U)^dag.
DensityMatrix evolve_full(const DensityMatrix& rho, const ComplexMatrix& u_se);

/// exp[i omega (sigma_y (x) sigma_y)] = cos(omega) 1 + i sin(omega) sigma_y (x) sigma_y.
ComplexMatrix v_omega(double omega);

/// Bloch vector of S after v_omega(omega), from the 16 steered coefficients
/// e^X (index 0 is the identity coefficient).
Eigen::Vector3d bloch_closed_form(const RealVector& e, double omega);

}  // namespace steerlab
