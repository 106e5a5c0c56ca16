#include "steerlab/dynamics.hpp"

#include <cmath>
#include <limits>

namespace steerlab {

UCoeffs::UCoeffs(int n_s, int n_e)
    : n_s_(n_s), n_e_(n_e),
      data_(static_cast<std::size_t>((n_s + 1) * (n_s + 1)) * (n_e + 1) * (n_e + 1), 0.0) {}

double unitarity_defect(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return (u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

UCoeffs u_coeffs(const ComplexMatrix& u, int dim_s, int dim_e) {
  if (u.rows() != dim_s * dim_e) throw DimensionError("u_coeffs: unitary does not act on S (x) E");
  require_finite(u, "u_coeffs");
  const double defect = unitarity_defect(u);
  if (defect > kUnitaryTol) {
    throw LinalgError("u_coeffs: matrix is not unitary (defect " + std::to_string(defect) + ")");
  }
  const auto bs = su_basis(dim_s);
  const auto be = su_basis(dim_e);
  std::vector<ComplexMatrix> products;
  for (int a = 0; a <= bs.count(); ++a) {
    for (int b = 0; b <= be.count(); ++b) products.push_back(kron(bs.element(a), be.element(b)));
  }
  const double norm = static_cast<double>(dim_s * dim_e);
  UCoeffs out(bs.count(), be.count());
  const int pe = be.count() + 1;
  for (int zeta = 0; zeta <= bs.count(); ++zeta) {
    for (int eta = 0; eta <= be.count(); ++eta) {
      const ComplexMatrix conj = u * products[zeta * pe + eta] * u.adjoint();
      for (int alpha = 0; alpha <= bs.count(); ++alpha) {
        for (int beta = 0; beta <= be.count(); ++beta) {
          // F^alpha (x) F^beta is Hermitian, so tr(C F) = sum C .* conj(F).
          const cplx tr = conj.cwiseProduct(products[alpha * pe + beta].conjugate()).sum();
          out(zeta, eta, alpha, beta) = tr.real() / norm;
        }
      }
    }
  }
  return out;
}

RealMatrix evolve_theta(const ThetaMatrix& theta, const UCoeffs& u) {
  if (u.n_s() != theta.n_s || u.n_e() != theta.n_e) {
    throw DimensionError("evolve_theta: coefficient and theta dimensions differ");
  }
  const int ns = theta.n_s, ne = theta.n_e;
  RealMatrix out = RealMatrix::Zero(ns, theta.n_r + 1);
  for (int j = 1; j <= ns; ++j) {
    auto row = out.row(j - 1);
    for (int l = 1; l <= ns; ++l) row += u(l, 0, j, 0) * theta.entries.row(l);
    for (int k = 1; k <= ne; ++k) row += u(0, k, j, 0) * theta.entries.row(ns + k);
    for (int l = 1; l <= ns; ++l) {
      for (int k = 1; k <= ne; ++k) {
        row += u(l, k, j, 0) * theta.entries.row(corr_index(l, k, ns, ne));
      }
    }
  }
  return out;
}

DensityMatrix evolve_full(const DensityMatrix& rho, const ComplexMatrix& u_se) {
  if (rho.dims().size() != 3) throw DimensionError("evolve_full: expected R,S,E factors");
  const int nr = rho.dims()[0];
  if (u_se.rows() * nr != rho.dim() || u_se.cols() != u_se.rows()) {
    throw DimensionError("evolve_full: unitary does not act on S (x) E");
  }
  const ComplexMatrix u = kron(ComplexMatrix::Identity(nr, nr), u_se);
  const ComplexMatrix out = u * rho.matrix() * u.adjoint();
  return DensityMatrix(0.5 * (out + out.adjoint()), rho.dims());
}

ComplexMatrix v_omega(double omega) {
  const ComplexMatrix yy = kron(pauli::y(), pauli::y());
  return std::cos(omega) * ComplexMatrix::Identity(4, 4) + cplx(0.0, std::sin(omega)) * yy;
}

Eigen::Vector3d bloch_closed_form(const RealVector& e, double omega) {
  if (e.size() != 16) throw DimensionError("bloch_closed_form: expected 16 coefficients");
  const double c = std::cos(2.0 * omega);
  const double s = std::sin(2.0 * omega);
  return {e(1) * c - e(14) * s, e(2), e(3) * c + e(8) * s};
}

}  // namespace steerlab
