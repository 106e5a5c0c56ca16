#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "steerlab/experiments.hpp"

namespace steerlab {

namespace {

// Collects checks; each records the worst measured value against a bound.
class Suite {
 public:
  void bound(std::string name, double value, double threshold, std::string detail = {}) {
    const bool ok = std::isfinite(value) && value <= threshold;
    out_.push_back({std::move(name), ok, value, threshold, std::move(detail)});
  }
  void require(std::string name, bool ok, std::string detail = {}) {
    out_.push_back({std::move(name), ok, ok ? 1.0 : 0.0, 1.0, std::move(detail)});
  }
  template <class F>
  void guarded(const std::string& name, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      out_.push_back({name, false, 0.0, 0.0, std::string("exception: ") + e.what()});
    }
  }
  std::vector<CheckResult> take() { return std::move(out_); }

 private:
  std::vector<CheckResult> out_;
};

DensityMatrix bell_rs_with(const DensityMatrix& e) {
  ComplexVector phi = ComplexVector::Zero(4);
  phi(0) = phi(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrix(kron(projector(phi), e.matrix()), kThreeQubits);
}

// Steered-then-evolved S state straight from full matrices.
ComplexMatrix oracle_s(const DensityMatrix& rho, const ComplexMatrix& u, const SteeringOperator& x) {
  const DensityMatrix se = steer_se(rho, x);
  return partial_trace(u * se.matrix() * u.adjoint(), DimList{2, 2}, {0});
}

}  // namespace

std::vector<CheckResult> run_verification_suite() {
  Suite s;

  s.guarded("basis orthogonality", [&] {
    double worst = 0.0;
    for (int n : {2, 3, 4}) {
      const auto b = su_basis(n);
      for (int i = 0; i < b.count(); ++i)
        for (int j = 0; j < b.count(); ++j) {
          const cplx t = (b.element(i) * b.element(j)).trace();
          worst = std::max(worst, std::abs(t - cplx(i == j ? n : 0.0, 0.0)));
        }
    }
    s.bound("basis orthogonality", worst, 1e-12);
  });

  s.guarded("theta round trip", [&] {
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto rho = random_state(kThreeQubits, rng);
      worst = std::max(worst, max_abs_diff(state_from_theta(theta_from_state(rho)), rho.matrix()));
    }
    s.bound("theta round trip", worst, 1e-12);
  });

  s.guarded("steering path equivalence", [&] {
    Rng rng(202);
    double worst = 0.0, min_eig = 1.0;
    for (int i = 0; i < 20; ++i) {
      const auto rho = random_canonical_state(rng);
      const auto theta = theta_from_state(rho);
      for (int k = 0; k < 10; ++k) {
        const auto x = sample_X(rng, SampleMode::Interior);
        const auto se = steer_se(rho, x);
        min_eig = std::min(min_eig, herm_eigenvalues(se.matrix())(0));
        const auto direct = bloch_vector(partial_trace(se.matrix(), se.dims(), {0}));
        worst = std::max(worst, (direct - reduced_steer_s(theta, x)).cwiseAbs().maxCoeff());
      }
    }
    s.bound("steering path equivalence", worst, 1e-12);
    s.bound("steered states positive", -min_eig, kPsdTol);
  });

  s.guarded("ellipsoid containment", [&] {
    Rng rng(303);
    bool ok = true;
    for (int i = 0; i < 10; ++i) {
      const auto theta = theta_from_state(random_canonical_state(rng));
      const auto g = steering_ellipsoid(theta);
      for (int k = 0; k < 20; ++k) ok = ok && g.contains(reduced_steer_s(theta, sample_X(rng, SampleMode::Interior)));
    }
    s.require("ellipsoid containment", ok);
  });

  s.guarded("u-coefficient isometry", [&] {
    Rng rng(404);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const auto u = u_coeffs(haar_unitary(4, rng), 2, 2);
      for (int z = 0; z <= 3; ++z)
        for (int e = 0; e <= 3; ++e)
          for (int z2 = 0; z2 <= 3; ++z2)
            for (int e2 = 0; e2 <= 3; ++e2) {
              double dot = 0.0;
              for (int a = 0; a <= 3; ++a)
                for (int b = 0; b <= 3; ++b) dot += u(z, e, a, b) * u(z2, e2, a, b);
              worst = std::max(worst, std::abs(dot - ((z == z2 && e == e2) ? 1.0 : 0.0)));
            }
    }
    s.bound("u-coefficient isometry", worst, 1e-10);
  });

  s.guarded("keystone equivalence", [&] {
    Rng rng(505);
    double worst = 0.0, theta_worst = 0.0;
    for (int i = 0; i < 40; ++i) {
      const auto rho = random_canonical_state(rng);
      const auto u = haar_unitary(4, rng);
      const auto theta = theta_from_state(rho);
      const RealMatrix tt = evolve_theta(theta, u_coeffs(u, 2, 2));
      const RealVector row0 = theta.entries.row(0).transpose();
      for (int k = 0; k < 20; ++k) {
        const auto x = sample_X(rng, SampleMode::Interior);
        const auto predicted = qubit_state(reduced_steer_s(tt, row0, x));
        worst = std::max(worst, max_abs_diff(predicted, oracle_s(rho, u, x)));
      }
      const auto full = theta_from_state(evolve_full(rho, u));
      theta_worst = std::max(theta_worst, (full.s_block() - tt).cwiseAbs().maxCoeff());
    }
    s.bound("keystone equivalence", worst, 1e-10);
    s.bound("evolved theta matches full evolution", theta_worst, 1e-10);
  });

  s.guarded("closed form", [&] {
    Rng rng(606);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const auto theta = theta_from_state(random_canonical_state(rng));
      for (int w = 0; w < 20; ++w) {
        const double omega = w * std::numbers::pi / 20.0;
        const RealMatrix tt = evolve_theta(theta, u_coeffs(v_omega(omega), 2, 2));
        const auto x = sample_X(rng, SampleMode::Interior);
        const RealVector e = theta.entries * x.coeffs();
        const Eigen::Vector3d general = tt * x.coeffs();
        worst = std::max(worst, (bloch_closed_form(e, omega) - general).cwiseAbs().maxCoeff());
      }
    }
    s.bound("closed form matches general law", worst, 1e-12);
  });

  s.guarded("reshuffle", [&] {
    const ComplexMatrix id = ComplexMatrix::Identity(4, 4);
    const auto map = map_from_a(id);
    Eigen::Vector4d expect(0, 0, 0, 2);
    s.bound("identity map B spectrum", (map.eigenvalues - expect).cwiseAbs().maxCoeff(), 1e-12);
    Rng rng(707);
    ComplexMatrix m(4, 4);
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) m(r, c) = cplx(rng.normal(), rng.normal());
    s.bound("reshuffle is an involution", max_abs_diff(reshuffle(reshuffle(m)), m), 0.0);
  });

  s.guarded("negativity of quoted spectrum", [&] {
    const Eigen::Vector4d lam(-0.5704, -0.0422, 0.2288, 2.3838);
    s.bound("quoted spectrum sums to 2", std::abs(lam.sum() - 2.0), 1e-3);
    s.bound("quoted spectrum negativity", std::abs(b_negativity(lam) - 1.2252), 1e-4);
  });

  s.guarded("product initial SE is CP", [&] {
    Rng rng(808);
    int bad = 0;
    double worst_dom = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto rho = bell_rs_with(random_state(DimList{2}, rng));
      const auto u = haar_unitary(4, rng);
      const auto rec = induced_map(theta_from_state(rho), u);
      if (!rec.ok() || !is_cp(*rec.map)) {
        ++bad;
        continue;
      }
      const auto dom = check_domain(rho, u, *rec.map, 20, rng);
      worst_dom = std::max(worst_dom, dom.max_oracle_error);
    }
    s.bound("product initial SE gives CP maps", bad, 0.0);
    s.bound("product initial SE oracle agreement", worst_dom, 1e-8);
  });

  s.guarded("markov chain", [&] {
    Rng rng(909);
    int not_cp = 0;
    double worst_nu = 0.0, worst_cmi = 0.0;
    for (int i = 0; i < 20; ++i) {
      const auto rho = random_markov_state(rng);
      const auto u = haar_unitary(4, rng);
      const auto rec = induced_map(theta_from_state(rho), u);
      if (!rec.map || !is_cp(*rec.map)) ++not_cp;
      const auto info = dpi_violation(rho, u);
      worst_nu = std::max(worst_nu, info.nu);
      worst_cmi = std::max(worst_cmi, std::abs(info.cmi));
    }
    s.bound("Markov chain maps are CP", not_cp, 0.0);
    s.bound("Markov chain DPI", worst_nu, 1e-9);
    s.bound("Markov chain CMI", worst_cmi, 1e-9);
  });

  s.guarded("information measures", [&] {
    ComplexVector ghz = ComplexVector::Zero(8);
    ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
    s.bound("GHZ CMI", std::abs(cond_mutual_info(DensityMatrix(projector(ghz), kThreeQubits)) - 1.0), 1e-10);
    ComplexVector singlet = ComplexVector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    const ComplexMatrix werner =
        0.5 * projector(singlet) + 0.5 * ComplexMatrix::Identity(4, 4) / 4.0;
    s.bound("Werner concurrence", std::abs(concurrence(DensityMatrix(werner, DimList{2, 2})) - 0.25), 1e-10);
    ComplexMatrix d = ComplexMatrix::Zero(2, 2);
    d(0, 0) = 0.75;
    d(1, 1) = 0.25;
    s.bound("binary entropy", std::abs(vn_entropy(d) - 0.8112781244591328), 1e-12);
    Rng rng(1010);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) worst = std::max(worst, -cond_mutual_info(random_state(kThreeQubits, rng)));
    s.bound("strong subadditivity", worst, 1e-9);
  });

  s.guarded("generation", [&] {
    GenerationConfig cfg;
    cfg.seed = 11;
    const auto g = gen_pairwise_entangled(cfg);
    const auto rho_r = g.rho.reduce({0});
    s.bound("generated state canonical gauge",
            max_abs_diff(rho_r.matrix(), 0.5 * ComplexMatrix::Identity(2, 2)), 1e-10);
    s.require("generated state thresholds",
              g.diagnostics.c_rs >= cfg.min_pair_concurrence && g.diagnostics.c_re >= cfg.min_pair_concurrence &&
                  g.diagnostics.c_se <= cfg.max_se_concurrence && ppt_separable(g.rho.reduce({1, 2})));
  });

  s.guarded("pairwise demo", [&] {
    GenerationConfig cfg;
    cfg.seed = 1;
    const auto r = run_pairwise_demo(cfg, 2.0, 100);
    std::ostringstream os;
    os << "b_neg " << (r.reconstruction.map ? r.reconstruction.map->b_neg : 0.0);
    s.require("pairwise demo passes", r.passed(), os.str());
    Rng rng(1111);
    const ComplexMatrix v = v_omega(2.0);
    const auto theta = r.theta;
    const auto rec = reconstruct_map(theta, r.theta_tilde,
                                     {SteeringOperator::from_bloch({0.6, 0.0, 0.0}),
                                      SteeringOperator::from_bloch({0.0, -0.7, 0.0}),
                                      SteeringOperator::from_bloch({0.0, 0.0, -0.8}),
                                      SteeringOperator::from_bloch({0.3, 0.3, 0.3})});
    s.bound("probe invariance", rec.map ? max_abs_diff(rec.map->a, r.reconstruction.map->a) : 1.0, 1e-8);
  });

  s.guarded("extended map", [&] {
    Rng rng(1212);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
      const auto theta = theta_from_state(random_canonical_state(rng));
      const auto u = haar_unitary(4, rng);
      const auto a = extend_map(theta, u_coeffs(u, 2, 2));
      const auto b = induced_map(theta, u);
      worst = std::max(worst, (a.map && b.map) ? max_abs_diff(a.map->a, b.map->a) : 1.0);
    }
    s.bound("extended map equals probe map on full domains", worst, 1e-9);
    const auto origin = evaluate_scan_point(0.0, 0.0, 0.0, 16);
    s.require("scan origin is degenerate",
              origin.psd && origin.status && *origin.status == MapStatus::DegenerateDomain);
  });

  s.guarded("trial determinism", [&] {
    TrialsConfig cfg;
    cfg.master_seed = 7;
    cfg.n_states = 6;
    cfg.n_unitaries = 5;
    cfg.workers = 1;
    const auto a = run_random_trials(cfg);
    cfg.workers = 3;
    const auto b = run_random_trials(cfg);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i)
      same = a[i].seed == b[i].seed && a[i].nu_max == b[i].nu_max && a[i].b_neg == b[i].b_neg &&
             a[i].status == b[i].status;
    s.require("trials independent of worker count", same);
  });

  return s.take();
}

}  // namespace steerlab
