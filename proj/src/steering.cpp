#include "steerlab/steering.hpp"

#include <cmath>

namespace steerlab {

SteeringOperator SteeringOperator::from_bloch(const Eigen::Vector3d& bloch) {
  if (!bloch.allFinite() || bloch.squaredNorm() > 1.0 + 1e-12) {
    throw std::invalid_argument("SteeringOperator: |X| must not exceed 1");
  }
  RealVector x(4);
  x << 1.0, bloch;
  return SteeringOperator(x);
}

SteeringOperator SteeringOperator::from_coeffs(const RealVector& x) {
  if (x.size() < 4 || x(0) != 1.0) throw std::invalid_argument("SteeringOperator: need X_0 = 1");
  if (x.size() == 4) return from_bloch(x.tail<3>());
  return SteeringOperator(x);
}

ComplexMatrix SteeringOperator::op(int dim_r) const {
  const auto basis = su_basis(dim_r);
  if (x_.size() != basis.count() + 1) throw DimensionError("SteeringOperator: wrong length for R");
  ComplexMatrix e = ComplexMatrix::Zero(dim_r, dim_r);
  for (int mu = 0; mu <= basis.count(); ++mu) e += x_(mu) * basis.element(mu);
  return e;
}

namespace {

ComplexMatrix steered_unnormalized(const DensityMatrix& rho, const SteeringOperator& x) {
  if (rho.dims().size() != 3) throw DimensionError("steer_se: expected R,S,E factors");
  const int nr = rho.dims()[0];
  const int nse = rho.dim() / nr;
  const ComplexMatrix e = kron(x.op(nr), ComplexMatrix::Identity(nse, nse));
  return partial_trace(e * rho.matrix(), rho.dims(), {1, 2});
}

}  // namespace

double steering_weight(const DensityMatrix& rho, const SteeringOperator& x) {
  return steered_unnormalized(rho, x).trace().real();
}

DensityMatrix steer_se(const DensityMatrix& rho, const SteeringOperator& x) {
  ComplexMatrix m = steered_unnormalized(rho, x);
  const double w = m.trace().real();
  if (w <= kSteeringProbabilityFloor) {
    throw SteeringError("steer_se: steering outcome has vanishing probability " + std::to_string(w));
  }
  m /= w;
  return DensityMatrix(0.5 * (m + m.adjoint()), DimList{rho.dims()[1], rho.dims()[2]});
}

Eigen::Vector3d reduced_steer_s(const RealMatrix& s_block, const RealVector& row0,
                                const SteeringOperator& x) {
  if (s_block.rows() != 3) throw DimensionError("reduced_steer_s: S must be a qubit");
  const double norm = row0.dot(x.coeffs());
  if (std::abs(norm) <= kSteeringProbabilityFloor) {
    throw SteeringError("reduced_steer_s: steering outcome has vanishing probability");
  }
  return s_block * x.coeffs() / norm;
}

Eigen::Vector3d reduced_steer_s(const ThetaMatrix& theta, const SteeringOperator& x) {
  return reduced_steer_s(theta.s_block(), theta.entries.row(0).transpose(), x);
}

Eigen::Vector3d bloch_vector(const ComplexMatrix& m) {
  if (m.rows() != 2 || m.cols() != 2) throw DimensionError("bloch_vector: expected 2x2");
  return {2.0 * m(0, 1).real(), -2.0 * m(0, 1).imag(), (m(0, 0) - m(1, 1)).real()};
}

ComplexMatrix qubit_state(const Eigen::Vector3d& r) {
  return 0.5 * (pauli::identity() + r(0) * pauli::x() + r(1) * pauli::y() + r(2) * pauli::z());
}

bool EllipsoidGeometry::contains(const Eigen::Vector3d& p, double tol) const {
  const Eigen::Vector3d local = axes.transpose() * (p - center);
  const double scale = std::max(1.0, semiaxes(0));
  double form = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (semiaxes(i) > kDomainRankTol * scale) {
      form += (local(i) / semiaxes(i)) * (local(i) / semiaxes(i));
    } else if (std::abs(local(i)) > tol) {
      return false;  // off the affine span of a degenerate ellipsoid
    }
  }
  return form <= 1.0 + tol;
}

EllipsoidGeometry steering_ellipsoid(const RealMatrix& s_block) {
  if (s_block.rows() != 3 || s_block.cols() != 4) {
    throw DimensionError("steering_ellipsoid: expected a 3x4 qubit S block");
  }
  EllipsoidGeometry g;
  g.center = s_block.col(0);
  const Eigen::Matrix3d q = s_block.rightCols(3);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(q, Eigen::ComputeFullU);
  g.semiaxes = svd.singularValues();
  g.axes = svd.matrixU();
  if (g.axes.determinant() < 0.0) g.axes.col(2) *= -1.0;
  return g;
}

EllipsoidGeometry steering_ellipsoid(const ThetaMatrix& theta) {
  if (theta.n_r != 3 || theta.n_s != 3) throw DimensionError("steering_ellipsoid: R and S must be qubits");
  return steering_ellipsoid(RealMatrix(theta.s_block()));
}

SteeringOperator sample_X(Rng& rng, SampleMode mode) {
  Eigen::Vector3d v;
  do {
    v << rng.normal(), rng.normal(), rng.normal();
  } while (v.squaredNorm() < 1e-24);
  v.normalize();
  if (mode == SampleMode::Interior) v *= std::cbrt(rng.uniform());
  return SteeringOperator::from_bloch(v);
}

int domain_rank(const RealMatrix& s_block) {
  if (s_block.rows() != 3 || s_block.cols() != 4) throw DimensionError("domain_rank: expected 3x4 block");
  const Eigen::Matrix3d q = s_block.rightCols(3);
  const Eigen::Vector3d sv = Eigen::JacobiSVD<Eigen::Matrix3d>(q).singularValues();
  const double cutoff = kDomainRankTol * std::max(1.0, sv(0));
  return static_cast<int>((sv.array() > cutoff).count());
}

int domain_rank(const ThetaMatrix& theta) { return domain_rank(RealMatrix(theta.s_block())); }

}  // namespace steerlab
