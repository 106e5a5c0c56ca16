#include "steerlab/states.hpp"

#include <cmath>
#include <sstream>

#include "steerlab/info.hpp"

namespace steerlab {

ComplexMatrix haar_unitary(int n, Rng& rng) {
  if (n < 1) throw std::invalid_argument("haar_unitary: n must be >= 1");
  ComplexMatrix z(n, n);
  const double s = 1.0 / std::sqrt(2.0);
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r < n; ++r) {
      const double re = rng.normal();
      const double im = rng.normal();
      z(r, c) = cplx(re * s, im * s);
    }
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (int j = 0; j < n; ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    q.col(j) *= mag > 0.0 ? d / mag : cplx(1.0, 0.0);
  }
  return q;
}

void GenerationConfig::validate() const {
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(min_pair_concurrence) || !in_unit(max_se_concurrence)) {
    throw std::invalid_argument("GenerationConfig: concurrence thresholds must lie in [0, 1]");
  }
  if (max_attempts < 1) throw std::invalid_argument("GenerationConfig: max_attempts must be >= 1");
}

DensityMatrix slocc_canonicalize(const DensityMatrix& rho) {
  if (rho.dims().size() != 3) throw DimensionError("slocc_canonicalize: expected R,S,E factors");
  const int nr = rho.dims()[0];
  const int nse = rho.dim() / nr;
  const ComplexMatrix rho_r = partial_trace(rho.matrix(), rho.dims(), {0});
  const double min_eig = herm_eigenvalues(rho_r)(0);
  if (min_eig <= kSloccRankFloor) {
    throw LinalgError("slocc_canonicalize: reduced reference state is singular (min eigenvalue " +
                      std::to_string(min_eig) + ")");
  }
  const ComplexMatrix m = kron(inverse_sqrt(static_cast<double>(nr) * rho_r, 0.0),
                               ComplexMatrix::Identity(nse, nse));
  ComplexMatrix out = m * rho.matrix() * m.adjoint();
  out /= out.trace().real();
  return DensityMatrix(0.5 * (out + out.adjoint()), rho.dims());
}

namespace {

// Applies a two-qubit unitary to qubits (a, b) of a three-qubit vector.
ComplexVector apply_pair(const ComplexVector& psi, const ComplexMatrix& u, int a, int b) {
  ComplexVector out = ComplexVector::Zero(8);
  const int spectator = 3 - a - b;
  auto index = [](int q0, int q1, int q2) { return 4 * q0 + 2 * q1 + q2; };
  for (int s = 0; s < 2; ++s) {
    for (int in = 0; in < 4; ++in) {
      int bits_in[3];
      bits_in[a] = in >> 1;
      bits_in[b] = in & 1;
      bits_in[spectator] = s;
      const cplx amp = psi(index(bits_in[0], bits_in[1], bits_in[2]));
      if (amp == cplx(0.0, 0.0)) continue;
      for (int o = 0; o < 4; ++o) {
        int bits_out[3];
        bits_out[a] = o >> 1;
        bits_out[b] = o & 1;
        bits_out[spectator] = s;
        out(index(bits_out[0], bits_out[1], bits_out[2])) += u(o, in) * amp;
      }
    }
  }
  return out;
}

}  // namespace

GeneratedState gen_pairwise_entangled(const GenerationConfig& cfg) {
  Rng rng(cfg.seed);
  return gen_pairwise_entangled(cfg, rng);
}

GeneratedState gen_pairwise_entangled(const GenerationConfig& cfg, Rng& rng) {
  cfg.validate();
  GenerationDiagnostics diag;
  for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
    diag.attempts = attempt;
    ComplexVector psi = ComplexVector::Zero(8);
    const int a = rng.bit(), b = rng.bit(), c = rng.bit();
    psi(4 * a + 2 * b + c) = 1.0;
    const ComplexMatrix u_rs = haar_unitary(4, rng);
    const ComplexMatrix u_re = haar_unitary(4, rng);
    psi = apply_pair(apply_pair(psi, u_rs, 0, 1), u_re, 0, 2);
    psi.normalize();

    const DensityMatrix pure(projector(psi), kThreeQubits);
    if (herm_eigenvalues(partial_trace(pure.matrix(), kThreeQubits, {0}))(0) <= kSloccRankFloor) {
      ++diag.singular_rejections;
      continue;
    }
    const DensityMatrix canonical = slocc_canonicalize(pure);

    // Smallest white-noise weight that makes the SE marginal PPT. Global
    // noise leaves rho_R = 1/2 untouched.
    const double pt_min = partial_transpose_min_eig(canonical.reduce({1, 2}));
    const double p = pt_min < 0.0 ? -pt_min / (0.25 - pt_min) : 0.0;
    const ComplexMatrix mixed =
        (1.0 - p) * canonical.matrix() + p * ComplexMatrix::Identity(8, 8) / 8.0;
    DensityMatrix rho(mixed, kThreeQubits);

    diag.c_rs = concurrence(rho.reduce({0, 1}));
    diag.c_re = concurrence(rho.reduce({0, 2}));
    const DensityMatrix se = rho.reduce({1, 2});
    diag.c_se = concurrence(se);
    if (diag.c_rs >= cfg.min_pair_concurrence && diag.c_re >= cfg.min_pair_concurrence &&
        diag.c_se <= cfg.max_se_concurrence && ppt_separable(se)) {
      return {std::move(rho), diag};
    }
  }
  std::ostringstream os;
  os << "gen_pairwise_entangled: no acceptable state in " << cfg.max_attempts
     << " attempts (min pair concurrence " << cfg.min_pair_concurrence << ")";
  throw GenerationError(os.str(), cfg.max_attempts);
}

DensityMatrix random_state(const DimList& dims, Rng& rng) {
  const int n = dims.total();
  ComplexMatrix g(n, n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) {
      const double re = rng.normal();
      g(r, c) = cplx(re, rng.normal());
    }
  ComplexMatrix m = g * g.adjoint();
  m /= m.trace().real();
  return DensityMatrix(0.5 * (m + m.adjoint()), dims);
}

DensityMatrix random_pure_state(const DimList& dims, Rng& rng) {
  const int n = dims.total();
  ComplexVector psi(n);
  for (int r = 0; r < n; ++r) {
    const double re = rng.normal();
    psi(r) = cplx(re, rng.normal());
  }
  psi.normalize();
  return DensityMatrix(projector(psi), dims);
}

DensityMatrix random_canonical_state(Rng& rng) {
  return slocc_canonicalize(random_state(kThreeQubits, rng));
}

DensityMatrix random_markov_state(Rng& rng) {
  const DensityMatrix rs = random_state(DimList{2, 2}, rng);
  const DensityMatrix e = random_state(DimList{2}, rng);
  return slocc_canonicalize(DensityMatrix(kron(rs.matrix(), e.matrix()), kThreeQubits));
}

ThetaMatrix pqt_theta(double p, double q, double t) {
  ThetaMatrix theta(3, 3, 3);
  theta.entries(1, 0) = p;
  theta.entries(3, 0) = p;
  theta.entries(5, 0) = q;
  theta.entries(8, 0) = p * q;
  theta.entries(14, 0) = p * q;
  for (int row : {2, 5, 8, 14}) {
    for (int i = 1; i <= 3; ++i) theta.entries(row, i) = t;
  }
  return theta;
}

DensityMatrix pqt_state(double p, double q, double t) {
  auto result = validate_state(state_from_theta(pqt_theta(p, q, t)), kThreeQubits);
  if (!result.ok()) {
    std::ostringstream os;
    os << "pqt_state(" << p << ", " << q << ", " << t << "): " << result.summary();
    throw StateError(os.str(), result.violations);
  }
  return std::move(*result.state);
}

}  // namespace steerlab
