#include "steerlab/basis.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace steerlab {

namespace {

int dim_from_count(int n) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n + 1))));
  if (d * d != n + 1) throw DimensionError("generator count " + std::to_string(n) + " is not N^2-1");
  return d;
}

// tr(a b) without forming the product.
cplx trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.cwiseProduct(b.transpose()).sum();
}

}  // namespace

ComplexMatrix GeneratorBasis::element(int index) const {
  if (index == 0) return ComplexMatrix::Identity(dim, dim);
  return generators.at(static_cast<std::size_t>(index - 1));
}

GeneratorBasis su_basis(int n) {
  if (n < 2) throw std::invalid_argument("su_basis: dimension must be >= 2");
  GeneratorBasis basis;
  basis.dim = n;
  // Standard Gell-Mann matrices have tr(g g) = 2; rescale to tr = n.
  const double scale = std::sqrt(n / 2.0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      ComplexMatrix sym = ComplexMatrix::Zero(n, n);
      sym(j, k) = scale;
      sym(k, j) = scale;
      basis.generators.push_back(sym);
      ComplexMatrix anti = ComplexMatrix::Zero(n, n);
      anti(j, k) = cplx(0.0, -scale);
      anti(k, j) = cplx(0.0, scale);
      basis.generators.push_back(anti);
    }
  }
  for (int l = 1; l < n; ++l) {
    ComplexMatrix diag = ComplexMatrix::Zero(n, n);
    const double f = scale * std::sqrt(2.0 / (l * (l + 1.0)));
    for (int m = 0; m < l; ++m) diag(m, m) = f;
    diag(l, l) = -l * f;
    basis.generators.push_back(diag);
  }
  return basis;
}

int corr_index(int j, int k, int n_s, int n_e) {
  if (j < 1 || j > n_s || k < 1 || k > n_e) {
    throw std::out_of_range("corr_index: (" + std::to_string(j) + "," + std::to_string(k) +
                            ") outside 1.." + std::to_string(n_s) + " x 1.." + std::to_string(n_e));
  }
  return n_s + n_e + n_e * (j - 1) + k;
}

int theta_row(int zeta, int eta, int n_s, int n_e) {
  if (zeta < 0 || zeta > n_s || eta < 0 || eta > n_e) throw std::out_of_range("theta_row");
  if (zeta == 0 && eta == 0) return 0;
  if (eta == 0) return zeta;
  if (zeta == 0) return n_s + eta;
  return corr_index(zeta, eta, n_s, n_e);
}

BasisPair theta_row_label(int row, int n_s, int n_e) {
  const int rows = (n_s + 1) * (n_e + 1);
  if (row < 0 || row >= rows) throw std::out_of_range("theta_row_label");
  if (row == 0) return {0, 0};
  if (row <= n_s) return {row, 0};
  if (row <= n_s + n_e) return {0, row - n_s};
  const int off = row - n_s - n_e - 1;
  return {off / n_e + 1, off % n_e + 1};
}

ThetaMatrix::ThetaMatrix(int n_r_, int n_s_, int n_e_)
    : n_r(n_r_), n_s(n_s_), n_e(n_e_),
      entries(RealMatrix::Zero((n_s_ + 1) * (n_e_ + 1), n_r_ + 1)) {
  entries(0, 0) = 1.0;
}

RealVector ThetaMatrix::steer(const RealVector& x) const {
  if (x.size() != n_r + 1) throw DimensionError("ThetaMatrix::steer: X has wrong length");
  return entries * x;
}

int ThetaMatrix::dim_r() const { return dim_from_count(n_r); }
int ThetaMatrix::dim_s() const { return dim_from_count(n_s); }
int ThetaMatrix::dim_e() const { return dim_from_count(n_e); }

ThetaMatrix theta_from_operator(const ComplexMatrix& m, const DimList& dims) {
  if (dims.size() != 3) throw DimensionError("theta_from_operator: expected three factors R,S,E");
  if (m.rows() != dims.total() || m.cols() != dims.total()) {
    throw DimensionError("theta_from_operator: matrix does not match dims");
  }
  const auto br = su_basis(dims[0]);
  const auto bs = su_basis(dims[1]);
  const auto be = su_basis(dims[2]);
  ThetaMatrix theta(br.count(), bs.count(), be.count());
  for (int zeta = 0; zeta <= bs.count(); ++zeta) {
    for (int eta = 0; eta <= be.count(); ++eta) {
      const ComplexMatrix se = kron(bs.element(zeta), be.element(eta));
      const int row = theta_row(zeta, eta, bs.count(), be.count());
      for (int mu = 0; mu <= br.count(); ++mu) {
        theta.entries(row, mu) = trace_of_product(m, kron(br.element(mu), se)).real();
      }
    }
  }
  return theta;
}

ThetaMatrix theta_from_state(const DensityMatrix& rho) {
  return theta_from_operator(rho.matrix(), rho.dims());
}

ComplexMatrix state_from_theta(const ThetaMatrix& theta) {
  const auto br = su_basis(theta.dim_r());
  const auto bs = su_basis(theta.dim_s());
  const auto be = su_basis(theta.dim_e());
  const int n = br.dim * bs.dim * be.dim;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int zeta = 0; zeta <= theta.n_s; ++zeta) {
    for (int eta = 0; eta <= theta.n_e; ++eta) {
      const int row = theta_row(zeta, eta, theta.n_s, theta.n_e);
      if (theta.entries.row(row).cwiseAbs().maxCoeff() == 0.0) continue;
      const ComplexMatrix se = kron(bs.element(zeta), be.element(eta));
      ComplexMatrix r_part = ComplexMatrix::Zero(br.dim, br.dim);
      for (int mu = 0; mu <= theta.n_r; ++mu) r_part += theta.entries(row, mu) * br.element(mu);
      out += kron(r_part, se);
    }
  }
  return out / static_cast<double>(n);
}

}  // namespace steerlab
