#include "steerlab/density.hpp"

#include <cmath>
#include <sstream>

namespace steerlab {

DensityMatrix::DensityMatrix(ComplexMatrix mat, DimList dims) {
  auto result = validate_state(mat, dims);
  if (!result.ok()) throw StateError("invalid density matrix: " + result.summary(), result.violations);
  *this = std::move(*result.state);
}

DensityMatrix DensityMatrix::reduce(const std::vector<int>& keep) const {
  std::vector<int> kept_dims;
  for (int k : keep) kept_dims.push_back(dims_[static_cast<std::size_t>(k)]);
  return DensityMatrix(partial_trace(mat_, dims_, keep), DimList(kept_dims));
}

std::string ValidationResult::summary() const {
  if (violations.empty()) return "valid";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].invariant << " (" << violations[i].magnitude << ")";
    if (!violations[i].detail.empty()) os << ": " << violations[i].detail;
  }
  return os.str();
}

ValidationResult validate_state(const ComplexMatrix& m, const DimList& dims) {
  ValidationResult out;
  if (m.rows() != m.cols() || m.rows() != dims.total()) {
    out.violations.push_back({"shape", static_cast<double>(m.rows()),
                              "expected " + std::to_string(dims.total()) + "x" +
                                  std::to_string(dims.total())});
    return out;
  }
  if (!m.allFinite()) {
    out.violations.push_back({"finite", 0.0, "NaN or infinite entry"});
    return out;
  }
  const double herm = hermiticity_defect(m);
  if (herm > kHermitianTol) out.violations.push_back({"hermitian", herm, "max |m - m^dagger|"});
  const double trace_err = std::abs(m.trace() - cplx(1.0, 0.0));
  if (trace_err > kTraceTol) out.violations.push_back({"trace", trace_err, "|tr m - 1|"});
  if (herm <= kHermitianTol) {
    const double min_eig = herm_eigenvalues(m)(0);
    if (min_eig < -kPsdTol) out.violations.push_back({"psd", min_eig, "minimum eigenvalue"});
  }
  if (out.violations.empty()) out.state = DensityMatrix(DensityMatrix::Unchecked{}, m, dims);
  return out;
}

DensityMatrix maximally_mixed(const DimList& dims) {
  const int n = dims.total();
  return DensityMatrix(ComplexMatrix::Identity(n, n) / static_cast<double>(n), dims);
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  std::vector<int> d = a.dims().dims();
  d.insert(d.end(), b.dims().dims().begin(), b.dims().dims().end());
  return DensityMatrix(kron(a.matrix(), b.matrix()), DimList(d));
}

}  // namespace steerlab
