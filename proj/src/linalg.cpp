#include "steerlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace steerlab {

DimList::DimList(std::initializer_list<int> dims) : DimList(std::vector<int>(dims)) {}

DimList::DimList(std::vector<int> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("DimList: no factors");
  for (int d : dims_) {
    if (d < 2) throw DimensionError("DimList: factor dimension must be >= 2");
  }
}

int DimList::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), 1, std::multiplies<>());
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw LinalgError(std::string(what) + ": non-finite entry");
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron(std::initializer_list<ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

namespace {

// Splits a flat index into per-factor digits (factor 0 most significant).
std::vector<int> digits_of(int index, const std::vector<int>& dims) {
  std::vector<int> d(dims.size());
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    d[k] = index % dims[k];
    index /= dims[k];
  }
  return d;
}

int index_of(const std::vector<int>& digits, const std::vector<int>& dims) {
  int idx = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) idx = idx * dims[k] + digits[k];
  return idx;
}

void check_square(const ComplexMatrix& m, const DimList& dims, const char* what) {
  if (m.rows() != m.cols()) throw DimensionError(std::string(what) + ": matrix not square");
  if (m.rows() != dims.total()) {
    throw DimensionError(std::string(what) + ": matrix dimension " + std::to_string(m.rows()) +
                         " does not match product of dims " + std::to_string(dims.total()));
  }
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const DimList& dims,
                            const std::vector<int>& keep) {
  check_square(m, dims, "partial_trace");
  const auto& d = dims.dims();
  const int n = static_cast<int>(d.size());
  if (keep.empty()) throw DimensionError("partial_trace: nothing kept");
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw DimensionError("partial_trace: factor index out of range");
    if (kept[k]) throw DimensionError("partial_trace: duplicate factor index");
    kept[k] = true;
  }
  std::vector<int> keep_sorted = keep;
  std::sort(keep_sorted.begin(), keep_sorted.end());
  std::vector<int> kept_dims, traced, traced_dims;
  for (int k : keep_sorted) kept_dims.push_back(d[k]);
  for (int k = 0; k < n; ++k) {
    if (!kept[k]) {
      traced.push_back(k);
      traced_dims.push_back(d[k]);
    }
  }
  const int kdim = std::accumulate(kept_dims.begin(), kept_dims.end(), 1, std::multiplies<>());
  const int tdim = std::accumulate(traced_dims.begin(), traced_dims.end(), 1, std::multiplies<>());

  // full_index[k][t]: flat index of (kept digits k, traced digits t)
  std::vector<std::vector<int>> full_index(kdim, std::vector<int>(tdim));
  std::vector<int> digits(n);
  for (int ki = 0; ki < kdim; ++ki) {
    const auto kd = digits_of(ki, kept_dims);
    for (std::size_t a = 0; a < keep_sorted.size(); ++a) digits[keep_sorted[a]] = kd[a];
    for (int ti = 0; ti < tdim; ++ti) {
      const auto td = tdim > 1 ? digits_of(ti, traced_dims) : std::vector<int>(traced.size(), 0);
      for (std::size_t a = 0; a < traced.size(); ++a) digits[traced[a]] = td[a];
      full_index[ki][ti] = index_of(digits, d);
    }
  }

  ComplexMatrix out = ComplexMatrix::Zero(kdim, kdim);
  for (int r = 0; r < kdim; ++r) {
    for (int c = 0; c < kdim; ++c) {
      cplx acc = 0.0;
      for (int t = 0; t < tdim; ++t) acc += m(full_index[r][t], full_index[c][t]);
      out(r, c) = acc;
    }
  }

  // Reorder kept factors to the caller's requested order.
  if (keep != keep_sorted) {
    std::vector<int> order_dims;
    for (int k : keep) order_dims.push_back(d[k]);
    std::vector<int> pos(keep.size());
    for (std::size_t a = 0; a < keep.size(); ++a) {
      pos[a] = static_cast<int>(std::find(keep_sorted.begin(), keep_sorted.end(), keep[a]) -
                                keep_sorted.begin());
    }
    std::vector<int> perm(kdim);
    for (int i = 0; i < kdim; ++i) {
      const auto od = digits_of(i, order_dims);
      std::vector<int> sd(keep.size());
      for (std::size_t a = 0; a < keep.size(); ++a) sd[pos[a]] = od[a];
      perm[i] = index_of(sd, kept_dims);
    }
    ComplexMatrix reordered(kdim, kdim);
    for (int r = 0; r < kdim; ++r)
      for (int c = 0; c < kdim; ++c) reordered(r, c) = out(perm[r], perm[c]);
    return reordered;
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, const DimList& dims, int factor) {
  check_square(m, dims, "partial_transpose");
  const auto& d = dims.dims();
  if (factor < 0 || factor >= static_cast<int>(d.size())) {
    throw DimensionError("partial_transpose: factor index out of range");
  }
  const int n = static_cast<int>(m.rows());
  ComplexMatrix out(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      auto rd = digits_of(r, d);
      auto cd = digits_of(c, d);
      std::swap(rd[factor], cd[factor]);
      out(index_of(rd, d), index_of(cd, d)) = m(r, c);
    }
  }
  return out;
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) { return hermiticity_defect(m) <= tol; }

namespace {
void require_hermitian(const ComplexMatrix& m, const char* what) {
  require_finite(m, what);
  const double defect = hermiticity_defect(m);
  if (defect > kHermitianTol) {
    throw LinalgError(std::string(what) + ": matrix not Hermitian (defect " +
                      std::to_string(defect) + ")");
  }
}
}  // namespace

EigenDecomposition herm_eig(const ComplexMatrix& m) {
  require_hermitian(m, "herm_eig");
  // Symmetrize so roundoff-level anti-Hermitian parts do not leak in.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw LinalgError("herm_eig: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

RealVector herm_eigenvalues(const ComplexMatrix& m) {
  require_hermitian(m, "herm_eigenvalues");
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw LinalgError("herm_eigenvalues: no convergence");
  return solver.eigenvalues();
}

ComplexMatrix apply_herm_func(const ComplexMatrix& m, const std::function<double(double)>& f) {
  const auto eig = herm_eig(m);
  RealVector fv(eig.values.size());
  for (Eigen::Index i = 0; i < fv.size(); ++i) fv(i) = f(eig.values(i));
  return eig.vectors * fv.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix inverse_sqrt(const ComplexMatrix& m, double floor) {
  return apply_herm_func(m, [floor](double x) {
    if (x <= floor) {
      throw LinalgError("inverse_sqrt: eigenvalue " + std::to_string(x) + " at or below " +
                        std::to_string(floor));
    }
    return 1.0 / std::sqrt(x);
  });
}

bool is_psd(const ComplexMatrix& m, double tol) { return herm_eigenvalues(m)(0) >= -tol; }

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::Identity(2, 2); }
ComplexMatrix x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
ComplexMatrix y() {
  ComplexMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
ComplexMatrix z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
ComplexMatrix sigma(int index) {
  switch (index) {
    case 0: return identity();
    case 1: return x();
    case 2: return y();
    case 3: return z();
    default: throw std::out_of_range("pauli::sigma: index must be 0..3");
  }
}
}  // namespace pauli

ComplexMatrix projector(const ComplexVector& psi) { return psi * psi.adjoint(); }

}  // namespace steerlab
