#include "steerlab/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace steerlab {

const char* to_string(MapStatus s) {
  switch (s) {
    case MapStatus::Ok: return "OK";
    case MapStatus::DegenerateDomain: return "DEGENERATE_DOMAIN";
    case MapStatus::NumericallySuspect: return "NUMERICALLY_SUSPECT";
    case MapStatus::ReconstructionFailure: return "RECONSTRUCTION_FAILURE";
  }
  return "UNKNOWN";
}

ComplexMatrix reshuffle(const ComplexMatrix& m) {
  if (m.rows() != 4 || m.cols() != 4) throw DimensionError("reshuffle: expected 4x4");
  ComplexMatrix out(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int ip = 0; ip < 2; ++ip)
        for (int jp = 0; jp < 2; ++jp)
          out(pair_index(i, ip), pair_index(j, jp)) = m(pair_index(i, j), pair_index(ip, jp));
  return out;
}

std::array<SteeringOperator, 4> canonical_probes() {
  return {SteeringOperator::from_bloch({1.0, 0.0, 0.0}),
          SteeringOperator::from_bloch({-1.0, 0.0, 0.0}),
          SteeringOperator::from_bloch({0.0, 1.0, 0.0}),
          SteeringOperator::from_bloch({0.0, 0.0, 1.0})};
}

ProbeSet make_probe_set(const ThetaMatrix& theta, const RealMatrix& theta_tilde,
                        const std::array<SteeringOperator, 4>& ops) {
  const RealVector row0 = theta.entries.row(0).transpose();
  ProbeSet p{ops, {}, {}};
  for (int k = 0; k < 4; ++k) {
    p.inputs[k] = reduced_steer_s(theta, ops[k]);
    p.outputs[k] = reduced_steer_s(theta_tilde, row0, ops[k]);
  }
  return p;
}

int verify_linear_independence(const ProbeSet& probes) {
  Eigen::Matrix4d m;
  for (int k = 0; k < 4; ++k) m.row(k) << 1.0, probes.inputs[k].transpose();
  const Eigen::Vector4d sv = Eigen::JacobiSVD<Eigen::Matrix4d>(m).singularValues();
  return static_cast<int>((sv.array() > kProbeRankTol).count());
}

namespace {

Eigen::Vector4cd vec_row_major(const ComplexMatrix& m) {
  return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

}  // namespace

double b_negativity(const Eigen::Vector4d& eigenvalues) { return eigenvalues.cwiseAbs().sum() - 2.0; }

double b_negativity(const DynamicalMap& map) { return b_negativity(map.eigenvalues); }

DynamicalMap map_from_a(const ComplexMatrix& a) {
  DynamicalMap map;
  map.a = a;
  map.b = reshuffle(a);
  const ComplexMatrix herm = 0.5 * (map.b + map.b.adjoint());
  map.eigenvalues = herm_eigenvalues(herm);
  map.b_neg = b_negativity(map.eigenvalues);
  return map;
}

namespace {

void finish(MapReconstruction& out, DynamicalMap map) {
  const double herm = hermiticity_defect(map.b);
  std::ostringstream os;
  if (!map.b.allFinite() || herm > kMapHermitianTol) {
    out.status = MapStatus::ReconstructionFailure;
    os << "B not Hermitian (defect " << herm << ")";
  } else if (std::abs(map.b_neg) > kSuspectNegativity) {
    out.status = MapStatus::NumericallySuspect;
    os << "B negativity " << map.b_neg << " exceeds " << kSuspectNegativity;
  } else {
    out.status = MapStatus::Ok;
  }
  out.detail = os.str();
  out.map = std::move(map);
}

}  // namespace

MapReconstruction reconstruct_map(const ProbeSet& probes) {
  MapReconstruction out;
  out.probe_rank = verify_linear_independence(probes);
  if (out.probe_rank < 4) {
    out.status = MapStatus::DegenerateDomain;
    out.detail = "probe states span rank " + std::to_string(out.probe_rank) + " < 4";
    return out;
  }
  Eigen::Matrix4cd in, outm;
  for (int k = 0; k < 4; ++k) {
    in.col(k) = vec_row_major(qubit_state(probes.inputs[k]));
    outm.col(k) = vec_row_major(qubit_state(probes.outputs[k]));
  }
  // A in = out  <=>  in^T A^T = out^T
  const ComplexMatrix a = in.transpose().fullPivLu().solve(outm.transpose()).transpose();
  if (!a.allFinite()) {
    out.status = MapStatus::ReconstructionFailure;
    out.detail = "non-finite A matrix";
    return out;
  }
  finish(out, map_from_a(a));
  return out;
}

MapReconstruction reconstruct_map(const ThetaMatrix& theta, const RealMatrix& theta_tilde,
                                  const std::array<SteeringOperator, 4>& ops) {
  return reconstruct_map(make_probe_set(theta, theta_tilde, ops));
}

DynamicalMap map_from_affine(const Eigen::Matrix3d& m, const Eigen::Vector3d& t) {
  ComplexMatrix a = ComplexMatrix::Zero(4, 4);
  ComplexMatrix image0 = pauli::identity();
  for (int i = 0; i < 3; ++i) image0 += t(i) * pauli::sigma(i + 1);
  for (int col = 0; col < 4; ++col) {
    ComplexMatrix x = ComplexMatrix::Zero(2, 2);
    x(col / 2, col % 2) = 1.0;
    ComplexMatrix y = 0.5 * x.trace() * image0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        y += 0.5 * m(i, j) * (x * pauli::sigma(j + 1)).trace() * pauli::sigma(i + 1);
    a.col(col) = vec_row_major(y);
  }
  return map_from_a(a);
}

MapReconstruction extend_map(const ThetaMatrix& theta, const UCoeffs& u) {
  if (theta.dim_s() != 2) throw DimensionError("extend_map: S must be a qubit");
  if (u.n_s() != theta.n_s || u.n_e() != theta.n_e)
    throw DimensionError("extend_map: coefficient table does not match theta");
  MapReconstruction out;
  const RealMatrix sb = theta.s_block();
  const int nr = theta.n_r;
  out.probe_rank = domain_rank(sb);
  if (out.probe_rank == 0) {
    out.status = MapStatus::DegenerateDomain;
    out.detail = "domain is a single point";
    return out;
  }
  const Eigen::Vector3d c = sb.col(0).head(3);
  const RealMatrix q = sb.rightCols(nr);
  const RealMatrix q_pinv = q.completeOrthogonalDecomposition().pseudoInverse();
  const RealMatrix kernel_proj = RealMatrix::Identity(nr, nr) - q_pinv * q;

  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  Eigen::Vector3d t = Eigen::Vector3d::Zero();
  double worst_residual = 0.0;
  // Adds coef * (c_o + q_o Q^+ (e - c)) to output component j.
  auto add = [&](int j, int row, double coef) {
    if (coef == 0.0) return;
    const RealVector qo = theta.entries.row(row).tail(nr).transpose();
    worst_residual = std::max(worst_residual, (kernel_proj * qo).norm());
    const RealVector g = q_pinv.transpose() * qo;
    t(j - 1) += coef * (theta.entries(row, 0) - g.dot(c));
    m.row(j - 1) += coef * g.head(3).transpose();
  };
  for (int j = 1; j <= 3; ++j) {
    for (int l = 1; l <= 3; ++l) m(j - 1, l - 1) += u(l, 0, j, 0);
    for (int k = 1; k <= theta.n_e; ++k) add(j, theta.n_s + k, u(0, k, j, 0));
    for (int l = 1; l <= 3; ++l)
      for (int k = 1; k <= theta.n_e; ++k) add(j, corr_index(l, k, theta.n_s, theta.n_e), u(l, k, j, 0));
  }
  if (worst_residual > kDomainRankTol * std::max(1.0, q.norm())) {
    out.status = MapStatus::ReconstructionFailure;
    std::ostringstream os;
    os << "evolved state depends on X beyond the S Bloch vector (residual " << worst_residual << ")";
    out.detail = os.str();
    return out;
  }
  finish(out, map_from_affine(m, t));
  return out;
}

bool is_cp(const DynamicalMap& map, double tol) { return map.eigenvalues(0) >= -tol; }

ComplexMatrix apply_map(const DynamicalMap& map, const ComplexMatrix& rho_s) {
  if (rho_s.rows() != 2 || rho_s.cols() != 2) throw DimensionError("apply_map: expected 2x2 input");
  const Eigen::Vector4cd v = map.a * vec_row_major(rho_s);
  ComplexMatrix out(2, 2);
  out << v(0), v(1), v(2), v(3);
  return out;
}

}  // namespace steerlab
