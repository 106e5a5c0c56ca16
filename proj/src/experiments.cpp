#include "steerlab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <numeric>
#include <thread>

namespace steerlab {

int default_workers() {
  if (const char* env = std::getenv("STEERLAB_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) return static_cast<int>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(1, workers), std::max<std::size_t>(n, 1));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double mutual_info_rs(const ComplexMatrix& rho_rse) {
  const ComplexMatrix rs = partial_trace(rho_rse, kThreeQubits, {0, 1});
  const DimList two{2, 2};
  return vn_entropy(partial_trace(rs, two, {0})) + vn_entropy(partial_trace(rs, two, {1})) -
         vn_entropy(rs);
}

namespace {

ComplexMatrix conjugate_se(const ComplexMatrix& rho, const ComplexMatrix& u_se) {
  const ComplexMatrix u = kron(pauli::identity(), u_se);
  ComplexMatrix out = u * rho * u.adjoint();
  return 0.5 * (out + out.adjoint());
}

double mi_after_omega(const ComplexMatrix& rho, double omega) {
  return mutual_info_rs(conjugate_se(rho, v_omega(omega)));
}

double wrap_omega(double omega) {
  const double pi = std::numbers::pi;
  double w = std::fmod(omega, pi);
  if (w < 0.0) w += pi;
  return w;
}

}  // namespace

OmegaSearch maximize_nu_over_omega(const DensityMatrix& rho, int grid_points) {
  if (grid_points < 1) throw std::invalid_argument("maximize_nu_over_omega: grid_points must be >= 1");
  const double pi = std::numbers::pi;
  const double h = pi / grid_points;
  const ComplexMatrix& m = rho.matrix();
  double best_omega = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid_points; ++k) {
    const double w = k * h;
    const double v = mi_after_omega(m, w);
    if (v > best) {
      best = v;
      best_omega = w;
    }
  }
  // Golden-section search on [best - h, best + h].
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = best_omega - h, hi = best_omega + h;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = mi_after_omega(m, x1), f2 = mi_after_omega(m, x2);
  while (hi - lo > 1e-6) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = mi_after_omega(m, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = mi_after_omega(m, x1);
    }
  }
  const double refined = 0.5 * (lo + hi);
  const double refined_value = mi_after_omega(m, refined);
  if (refined_value > best) best_omega = refined;

  OmegaSearch out;
  out.omega_star = wrap_omega(best_omega);
  out.report = dpi_violation(rho, v_omega(out.omega_star));
  return out;
}

UnitarySearch maximize_nu_over_unitaries(const DensityMatrix& rho, int n_samples, Rng& rng) {
  if (n_samples < 1) throw std::invalid_argument("maximize_nu_over_unitaries: n_samples must be >= 1");
  UnitarySearch out;
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_samples; ++i) {
    ComplexMatrix u = haar_unitary(4, rng);
    const double v = mutual_info_rs(conjugate_se(rho.matrix(), u));
    if (v > best) {
      best = v;
      out.u_star = std::move(u);
      out.best_index = i;
    }
  }
  out.report = dpi_violation(rho, out.u_star);
  return out;
}

MapReconstruction induced_map(const ThetaMatrix& theta, const ComplexMatrix& u_se) {
  return reconstruct_map(theta, evolve_theta(theta, u_coeffs(u_se, 2, 2)));
}

DomainCheck check_domain(const DensityMatrix& rho, const ComplexMatrix& u_se,
                         const DynamicalMap& map, int samples, Rng& rng) {
  DomainCheck out;
  out.samples = samples;
  out.min_eigenvalue = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const SteeringOperator x = sample_X(rng, SampleMode::Interior);
    const DensityMatrix se = steer_se(rho, x);
    const ComplexMatrix s_in = partial_trace(se.matrix(), se.dims(), {0});
    ComplexMatrix mapped = apply_map(map, s_in);
    const ComplexMatrix evolved = u_se * se.matrix() * u_se.adjoint();
    const ComplexMatrix oracle = partial_trace(evolved, se.dims(), {0});
    out.max_oracle_error = std::max(out.max_oracle_error, max_abs_diff(mapped, oracle));
    mapped = 0.5 * (mapped + mapped.adjoint());
    out.min_eigenvalue = std::min(out.min_eigenvalue, herm_eigenvalues(mapped)(0));
  }
  out.passed = out.min_eigenvalue >= -kPsdTol && out.max_oracle_error <= 1e-8;
  return out;
}

bool DemoReport::passed() const {
  return reconstruction.ok() && trace_b_error <= 1e-8 && b_hermiticity <= 1e-8 && domain.passed;
}

DemoReport run_pairwise_demo(const GenerationConfig& cfg, double omega, int domain_samples) {
  Rng rng(cfg.seed);
  auto generated = gen_pairwise_entangled(cfg, rng);
  DemoReport r;
  r.seed = cfg.seed;
  r.omega = omega;
  r.generation = generated.diagnostics;
  const DensityMatrix& rho = generated.rho;
  const ComplexMatrix v = v_omega(omega);
  r.theta = theta_from_state(rho);
  r.theta_tilde = evolve_theta(r.theta, u_coeffs(v, 2, 2));
  r.initial = steering_ellipsoid(r.theta);
  r.final = steering_ellipsoid(r.theta_tilde);
  r.reconstruction = reconstruct_map(r.theta, r.theta_tilde);
  r.info = dpi_violation(rho, v);
  if (r.reconstruction.map) {
    const auto& map = *r.reconstruction.map;
    r.cp = is_cp(map);
    r.trace_b_error = std::abs(map.b.trace() - cplx(2.0, 0.0));
    r.b_hermiticity = hermiticity_defect(map.b);
    Rng domain_rng(derive_seed(cfg.seed, 0xd0a1));
    r.domain = check_domain(rho, v, map, domain_samples, domain_rng);
  }
  return r;
}

void ScanConfig::validate() const {
  if (!(step > 0.0 && step <= 0.25)) throw std::invalid_argument("scan step must lie in (0, 0.25]");
  if (omega_grid < 1) throw std::invalid_argument("omega grid must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
}

int ScanConfig::points_per_axis() const {
  return static_cast<int>(std::floor(2.0 / step + 1e-9)) + 1;
}

ScanPoint evaluate_scan_point(double p, double q, double t, int omega_grid) {
  ScanPoint pt;
  pt.p = p;
  pt.q = q;
  pt.t = t;
  auto checked = validate_state(state_from_theta(pqt_theta(p, q, t)), kThreeQubits);
  if (!checked.ok()) {
    pt.psd = false;
    for (const auto& v : checked.violations)
      if (v.invariant == "psd") pt.min_eigenvalue = v.magnitude;
    return pt;
  }
  const DensityMatrix& rho = *checked.state;
  pt.psd = true;
  pt.min_eigenvalue = herm_eigenvalues(rho.matrix())(0);
  const auto search = maximize_nu_over_omega(rho, omega_grid);
  pt.omega_star = search.omega_star;
  pt.nu = search.report.nu;
  pt.cmi = search.report.cmi;
  pt.ssa_margin = search.report.cmi;
  pt.mi_before = search.report.mi_before;
  pt.mi_after = search.report.mi_after;
  const ThetaMatrix theta = pqt_theta(p, q, t);
  const ComplexMatrix v = v_omega(search.omega_star);
  auto rec = induced_map(theta, v);
  if (rec.status == MapStatus::DegenerateDomain) {
    auto ext = extend_map(theta, u_coeffs(v, 2, 2));
    if (ext.map) {
      rec = std::move(ext);
      pt.extended = true;
    }
  }
  pt.status = rec.status;
  if (rec.map) {
    pt.b_neg = rec.map->b_neg;
    pt.cp = is_cp(*rec.map);
  }
  return pt;
}

std::vector<ScanPoint> run_pqt_scan(const ScanConfig& cfg) {
  cfg.validate();
  const int n = cfg.points_per_axis();
  auto value = [&](int i) {
    // Snap to the grid so printed parameters are exact decimals.
    return std::round((-1.0 + i * cfg.step) * 1e9) / 1e9;
  };
  std::vector<ScanPoint> out(static_cast<std::size_t>(n) * n * n);
  parallel_for(out.size(), cfg.workers, [&](std::size_t idx) {
    const int ip = static_cast<int>(idx / (n * n));
    const int iq = static_cast<int>((idx / n) % n);
    const int it = static_cast<int>(idx % n);
    out[idx] = evaluate_scan_point(value(ip), value(iq), value(it), cfg.omega_grid);
  });
  return out;
}

const char* to_string(TrialStatus s) {
  switch (s) {
    case TrialStatus::Ok: return "OK";
    case TrialStatus::DegenerateDomain: return "DEGENERATE_DOMAIN";
    case TrialStatus::NumericallySuspect: return "NUMERICALLY_SUSPECT";
    case TrialStatus::ReconstructionFailure: return "RECONSTRUCTION_FAILURE";
    case TrialStatus::GenerationFailure: return "GENERATION_FAILURE";
  }
  return "UNKNOWN";
}

TrialStatus trial_status(MapStatus s) {
  switch (s) {
    case MapStatus::Ok: return TrialStatus::Ok;
    case MapStatus::DegenerateDomain: return TrialStatus::DegenerateDomain;
    case MapStatus::NumericallySuspect: return TrialStatus::NumericallySuspect;
    case MapStatus::ReconstructionFailure: return TrialStatus::ReconstructionFailure;
  }
  return TrialStatus::ReconstructionFailure;
}

void TrialsConfig::validate() const {
  if (n_states < 1 || n_unitaries < 1) throw std::invalid_argument("trial counts must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  generation.validate();
}

TrialRecord run_trial(const TrialsConfig& cfg, int trial_id) {
  TrialRecord rec;
  rec.trial_id = trial_id;
  rec.seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(trial_id));
  Rng rng(rec.seed);
  GenerationConfig gen = cfg.generation;
  gen.seed = rec.seed;
  std::optional<GeneratedState> generated;
  try {
    generated = gen_pairwise_entangled(gen, rng);
  } catch (const GenerationError& e) {
    rec.status = TrialStatus::GenerationFailure;
    rec.attempts = e.attempts();
    return rec;
  }
  const DensityMatrix& rho = generated->rho;
  rec.attempts = generated->diagnostics.attempts;
  rec.c_rs = generated->diagnostics.c_rs;
  rec.c_re = generated->diagnostics.c_re;
  rec.c_se = generated->diagnostics.c_se;
  const auto search = maximize_nu_over_unitaries(rho, cfg.n_unitaries, rng);
  rec.cmi = search.report.cmi;
  rec.nu_max = search.report.nu;
  const auto map = induced_map(theta_from_state(rho), search.u_star);
  rec.status = trial_status(map.status);
  rec.b_neg = map.map ? map.map->b_neg : std::numeric_limits<double>::quiet_NaN();
  return rec;
}

std::vector<TrialRecord> run_random_trials(const TrialsConfig& cfg) {
  cfg.validate();
  std::vector<TrialRecord> out(static_cast<std::size_t>(cfg.n_states));
  parallel_for(out.size(), cfg.workers,
               [&](std::size_t i) { out[i] = run_trial(cfg, static_cast<int>(i)); });
  return out;
}

namespace {

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 2) return 0.0;
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

TrialSummary summarize(const std::vector<TrialRecord>& records) {
  TrialSummary s;
  s.total = static_cast<int>(records.size());
  std::vector<double> cmi, nu, bneg;
  for (const auto& r : records) {
    s.candidate_attempts += r.attempts;
    switch (r.status) {
      case TrialStatus::Ok:
        ++s.ok;
        cmi.push_back(r.cmi);
        nu.push_back(r.nu_max);
        bneg.push_back(r.b_neg);
        break;
      case TrialStatus::GenerationFailure: ++s.generation_failures; break;
      case TrialStatus::DegenerateDomain: ++s.degenerate; break;
      case TrialStatus::NumericallySuspect: ++s.suspect; break;
      case TrialStatus::ReconstructionFailure: ++s.reconstruction_failures; break;
    }
  }
  const long long accepted = s.total - s.generation_failures;
  if (s.candidate_attempts > 0) {
    s.candidate_rejection_rate =
        1.0 - static_cast<double>(accepted) / static_cast<double>(s.candidate_attempts);
  }
  s.spearman_cmi_nu = spearman(cmi, nu);
  s.spearman_nu_bneg = spearman(nu, bneg);
  s.spearman_cmi_bneg = spearman(cmi, bneg);
  return s;
}

}  // namespace steerlab
