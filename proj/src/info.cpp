#include "steerlab/info.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <cmath>

namespace steerlab {

namespace {

void require_two_qubits(const DensityMatrix& rho, const char* what) {
  if (rho.dim() != 4 || rho.dims().size() != 2) {
    throw DimensionError(std::string(what) + ": expected a two-qubit state");
  }
}

}  // namespace

double vn_entropy(const ComplexMatrix& m) {
  const RealVector values = herm_eigenvalues(m);
  double s = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    const double x = values(i);
    if (x < -kEigenFloor) {
      throw LinalgError("vn_entropy: eigenvalue " + std::to_string(x) + " is not a roundoff");
    }
    if (x > 0.0) s -= x * std::log2(x);
  }
  return s;
}

double vn_entropy(const DensityMatrix& rho) { return vn_entropy(rho.matrix()); }

double mutual_info(const DensityMatrix& rho, const Bipartition& parts) {
  if (parts.a.empty() || parts.b.empty()) throw DimensionError("mutual_info: empty part");
  std::vector<int> joint = parts.a;
  for (int k : parts.b) {
    if (std::find(parts.a.begin(), parts.a.end(), k) != parts.a.end()) {
      throw DimensionError("mutual_info: parts overlap");
    }
    joint.push_back(k);
  }
  const auto& dims = rho.dims();
  const ComplexMatrix& m = rho.matrix();
  const double s_ab = joint.size() == dims.size() ? vn_entropy(m) : vn_entropy(partial_trace(m, dims, joint));
  return vn_entropy(partial_trace(m, dims, parts.a)) + vn_entropy(partial_trace(m, dims, parts.b)) - s_ab;
}

double cond_mutual_info(const DensityMatrix& rho) {
  if (rho.dims().size() != 3) throw DimensionError("cond_mutual_info: expected R,S,E factors");
  const auto& m = rho.matrix();
  const auto& d = rho.dims();
  return vn_entropy(partial_trace(m, d, {0, 1})) + vn_entropy(partial_trace(m, d, {1, 2})) -
         vn_entropy(partial_trace(m, d, {1})) - vn_entropy(m);
}

InfoReport dpi_violation(const DensityMatrix& rho, const DensityMatrix& evolved) {
  InfoReport r;
  r.cmi = cond_mutual_info(rho);
  r.mi_before = mutual_info(rho, {{0}, {1}});
  r.mi_after = mutual_info(evolved, {{0}, {1}});
  r.nu = std::max(0.0, r.mi_after - r.mi_before);
  return r;
}

InfoReport dpi_violation(const DensityMatrix& rho, const ComplexMatrix& u_se) {
  const int nr = rho.dims()[0];
  const ComplexMatrix u = kron(ComplexMatrix::Identity(nr, nr), u_se);
  if (u.rows() != rho.dim()) throw DimensionError("dpi_violation: unitary does not act on S (x) E");
  const ComplexMatrix out = u * rho.matrix() * u.adjoint();
  return dpi_violation(rho, DensityMatrix(0.5 * (out + out.adjoint()), rho.dims()));
}

double concurrence(const DensityMatrix& rho) {
  require_two_qubits(rho, "concurrence");
  const ComplexMatrix yy = kron(pauli::y(), pauli::y());
  const ComplexMatrix flipped = yy * rho.matrix().conjugate() * yy;
  // sqrt(rho) flipped sqrt(rho) is Hermitian with the same spectrum as
  // rho * flipped.
  const ComplexMatrix root = apply_herm_func(rho.matrix(), [](double x) {
    return x > 0.0 ? std::sqrt(x) : 0.0;
  });
  ComplexMatrix r = root * flipped * root;
  r = 0.5 * (r + r.adjoint());
  RealVector mu = herm_eigenvalues(r);
  std::array<double, 4> lam{};
  for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(0.0, mu(i)));
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::clamp(lam[0] - lam[1] - lam[2] - lam[3], 0.0, 1.0);
}

double partial_transpose_min_eig(const DensityMatrix& rho) {
  require_two_qubits(rho, "partial_transpose_min_eig");
  return herm_eigenvalues(partial_transpose(rho.matrix(), rho.dims(), 1))(0);
}

bool ppt_separable(const DensityMatrix& rho) { return partial_transpose_min_eig(rho) >= -kPsdTol; }

}  // namespace steerlab
