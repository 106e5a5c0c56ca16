#include "doctest.h"
#include "support.hpp"

using namespace testing;

namespace {

double h2(double p) { return -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST_CASE("von Neumann entropy") {
  CHECK(vn_entropy(DensityMatrix(0.5 * pauli::identity(), DimList{2})) == doctest::Approx(1.0).epsilon(1e-14));
  Rng rng(60);
  CHECK(std::abs(vn_entropy(random_pure_state(DimList{2, 2}, rng))) < 1e-12);
  CHECK(vn_entropy(diag2(0.75, 0.25)) == doctest::Approx(h2(0.75)).epsilon(1e-14));
  CHECK(vn_entropy(diag2(0.75, 0.25)) == doctest::Approx(0.811278124459).epsilon(1e-11));
  CHECK(vn_entropy(diag2(1.0 + 5e-10, -5e-10)) == doctest::Approx(0.0));
  CHECK_THROWS_AS(vn_entropy(diag2(1.1, -0.1)), LinalgError);
}

TEST_CASE("mutual information") {
  Rng rng(61);
  const auto a = random_state(DimList{2}, rng), b = random_state(DimList{2}, rng);
  const DensityMatrix prod(kron(a.matrix(), b.matrix()), DimList{2, 2});
  CHECK(std::abs(mutual_info(prod, {{0}, {1}})) < 1e-12);
  const DensityMatrix bell(projector(bell_phi_plus()), DimList{2, 2});
  CHECK(mutual_info(bell, {{0}, {1}}) == doctest::Approx(2.0).epsilon(1e-12));
  ComplexMatrix cc = ComplexMatrix::Zero(4, 4);
  cc(0, 0) = cc(3, 3) = 0.5;
  CHECK(mutual_info(DensityMatrix(cc, DimList{2, 2}), {{0}, {1}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS(mutual_info(bell, {{0}, {0}}));
  CHECK_THROWS(mutual_info(bell, {{0}, {2}}));
  CHECK_THROWS(mutual_info(bell, {{}, {1}}));
}

TEST_CASE("conditional mutual information") {
  Rng rng(62);
  const DensityMatrix prod(kron({random_state(DimList{2}, rng).matrix(), random_state(DimList{2}, rng).matrix(),
                                 random_state(DimList{2}, rng).matrix()}),
                           kThreeQubits);
  CHECK(std::abs(cond_mutual_info(prod)) < 1e-12);
  const DensityMatrix chain(kron(random_state(DimList{2, 2}, rng).matrix(), random_state(DimList{2}, rng).matrix()),
                            kThreeQubits);
  CHECK(std::abs(cond_mutual_info(chain)) < 1e-12);
  CHECK(cond_mutual_info(DensityMatrix(projector(ghz()), kThreeQubits)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("strong subadditivity on 1000 random states") {
  Rng rng(63);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto rho = i % 2 ? random_state(kThreeQubits, rng) : random_pure_state(kThreeQubits, rng);
    worst = std::min(worst, cond_mutual_info(rho));
  }
  CHECK(worst >= -1e-9);
}

TEST_CASE("DPI violation report") {
  Rng rng(64);
  const auto rho = random_canonical_state(rng);
  const auto none = dpi_violation(rho, ComplexMatrix::Identity(4, 4));
  CHECK(none.nu == 0.0);
  CHECK(std::abs(none.raw_gain()) < 1e-12);
  const auto local = dpi_violation(rho, kron(haar_unitary(2, rng), haar_unitary(2, rng)));
  CHECK(local.nu < 1e-12);
  CHECK(std::abs(local.raw_gain()) < 1e-12);
  for (int i = 0; i < 100; ++i) {
    const auto markov = random_markov_state(rng);
    const auto r = dpi_violation(markov, haar_unitary(4, rng));
    CHECK(r.nu <= 1e-9);
    CHECK(r.raw_gain() <= 1e-9);
  }
  const auto r = dpi_violation(rho, haar_unitary(4, rng));
  CHECK(r.nu >= 0.0);
  CHECK(r.cmi == doctest::Approx(cond_mutual_info(rho)));
  CHECK(r.mi_before == doctest::Approx(mutual_info(rho, {{0}, {1}})));
}

TEST_CASE("concurrence") {
  CHECK(concurrence(DensityMatrix(projector(bell_phi_plus()), DimList{2, 2})) == doctest::Approx(1.0).epsilon(1e-12));
  Rng rng(65);
  for (int i = 0; i < 10; ++i) {
    const DensityMatrix prod(kron(random_pure_state(DimList{2}, rng).matrix(), random_state(DimList{2}, rng).matrix()),
                             DimList{2, 2});
    CHECK(concurrence(prod) < 1e-7);
  }
  for (double p : {0.2, 0.5, 0.8}) {
    const ComplexMatrix w = p * projector(singlet()) + (1 - p) * ComplexMatrix::Identity(4, 4) / 4.0;
    CHECK(concurrence(DensityMatrix(w, DimList{2, 2})) == doctest::Approx(std::max(0.0, (3 * p - 1) / 2)).epsilon(1e-10));
  }
  // Pure states: C = 2|ad - bc|.
  for (int i = 0; i < 10; ++i) {
    const ComplexVector psi = random_pure_state(DimList{2, 2}, rng).matrix().col(0).normalized();
    const DensityMatrix pure(projector(psi), DimList{2, 2});
    CHECK(concurrence(pure) == doctest::Approx(2 * std::abs(psi(0) * psi(3) - psi(1) * psi(2))).epsilon(1e-8));
  }
  CHECK_THROWS_AS(concurrence(DensityMatrix(ComplexMatrix::Identity(8, 8) / 8.0, kThreeQubits)), DimensionError);
}

TEST_CASE("PPT agrees with concurrence on two qubits") {
  CHECK(ppt_separable(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0, DimList{2, 2})));
  CHECK_FALSE(ppt_separable(DensityMatrix(projector(bell_phi_plus()), DimList{2, 2})));
  const ComplexMatrix w = 0.3 * projector(singlet()) + 0.7 * ComplexMatrix::Identity(4, 4) / 4.0;
  CHECK(ppt_separable(DensityMatrix(w, DimList{2, 2})));
  Rng rng(66);
  for (int i = 0; i < 1000; ++i) {
    const auto rho = random_state(DimList{2, 2}, rng);
    if (concurrence(rho) > 1e-6) CHECK_FALSE(ppt_separable(rho));
    if (ppt_separable(rho)) CHECK(concurrence(rho) < 1e-6);
  }
}
