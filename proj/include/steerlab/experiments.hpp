#pragma once

// The numerical studies: a single pairwise-entangled demonstration, the
// (P, Q, T) parameter scan, and random-state trials.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "steerlab/dynamics.hpp"
#include "steerlab/info.hpp"
#include "steerlab/states.hpp"
#include "steerlab/steering.hpp"
#include "steerlab/tomography.hpp"

namespace steerlab {

/// Worker count from STEERLAB_WORKERS, else the hardware concurrency.
int default_workers();

/// Runs fn(i) for i in [0, n) on `workers` threads. The first exception
/// thrown by any task is rethrown after all threads join.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// I(R:S) of a three-party operator (no validation; used in search loops).
double mutual_info_rs(const ComplexMatrix& rho_rse);

struct OmegaSearch {
  double omega_star = 0.0;
  InfoReport report;
};

/// Coarse grid over omega in [0, pi) followed by golden-section refinement
/// (to 1e-6 in omega) around the best grid point. Maximizes I(R:S') under
/// v_omega, which is equivalent to maximizing nu.
OmegaSearch maximize_nu_over_omega(const DensityMatrix& rho, int grid_points);

struct UnitarySearch {
  ComplexMatrix u_star;
  InfoReport report;
  int best_index = 0;
};

/// Best of n_samples Haar unitaries on S (x) E drawn from `rng`, ranked by
/// I(R:S'). Ties keep the earliest sample.
UnitarySearch maximize_nu_over_unitaries(const DensityMatrix& rho, int n_samples, Rng& rng);

/// Dynamical map on S induced by 1_R (x) U, reconstructed with the canonical
/// probes from the theta matrix of a canonical-gauge three-qubit state.
MapReconstruction induced_map(const ThetaMatrix& theta, const ComplexMatrix& u_se);

struct DomainCheck {
  int samples = 0;
  double min_eigenvalue = 0.0;    // over mapped domain states
  double max_oracle_error = 0.0;  // apply_map vs steer-then-evolve
  bool passed = false;
};

/// Samples `samples` steering operators (interior of the ball), maps each
/// steered S state with `map` and compares against the full-matrix oracle.
DomainCheck check_domain(const DensityMatrix& rho, const ComplexMatrix& u_se,
                         const DynamicalMap& map, int samples, Rng& rng);

struct DemoReport {
  std::uint64_t seed = 0;
  double omega = 2.0;
  GenerationDiagnostics generation;
  ThetaMatrix theta;
  RealMatrix theta_tilde;
  EllipsoidGeometry initial;
  EllipsoidGeometry final;
  MapReconstruction reconstruction;
  bool cp = false;
  InfoReport info;
  DomainCheck domain;
  double trace_b_error = 0.0;
  double b_hermiticity = 0.0;

  /// OK map, tr B = 2 and B Hermitian within 1e-8, domain checks passed.
  bool passed() const;
};

/// Generates a pairwise-entangled state, evolves under v_omega(omega),
/// reconstructs the map with the canonical probes and checks it on
/// `domain_samples` domain states.
DemoReport run_pairwise_demo(const GenerationConfig& cfg, double omega = 2.0,
                             int domain_samples = 200);

struct ScanConfig {
  double step = 0.1;
  int omega_grid = 64;
  int workers = 1;

  void validate() const;
  int points_per_axis() const;
};

struct ScanPoint {
  double p = 0.0, q = 0.0, t = 0.0;
  bool psd = false;
  double min_eigenvalue = 0.0;
  // Present for PSD points only.
  std::optional<double> omega_star, nu, cmi, mi_before, mi_after;
  std::optional<MapStatus> status;
  // True when the probes saw a degenerate domain and the map came from
  // extend_map instead.
  bool extended = false;
  // Present when a map was reconstructed.
  std::optional<double> b_neg;
  std::optional<bool> cp;
  std::optional<double> ssa_margin;  // cond_mutual_info, >= -1e-9 by SSA
};

/// Probe reconstruction first; on a degenerate domain, extend_map.
ScanPoint evaluate_scan_point(double p, double q, double t, int omega_grid);

/// Full grid over [-1, 1]^3, ordered with P slowest and T fastest.
std::vector<ScanPoint> run_pqt_scan(const ScanConfig& cfg);

enum class TrialStatus { Ok, DegenerateDomain, NumericallySuspect, ReconstructionFailure, GenerationFailure };

const char* to_string(TrialStatus s);
TrialStatus trial_status(MapStatus s);

struct TrialRecord {
  int trial_id = 0;
  std::uint64_t seed = 0;
  double c_rs = 0.0, c_re = 0.0, c_se = 0.0;
  double cmi = 0.0;
  double nu_max = 0.0;
  double b_neg = 0.0;
  TrialStatus status = TrialStatus::GenerationFailure;
  int attempts = 0;
};

struct TrialsConfig {
  std::uint64_t master_seed = 1;
  int n_states = 500;
  int n_unitaries = 100;
  GenerationConfig generation;  // seed field ignored; per-trial seeds are derived
  int workers = 1;

  void validate() const;
};

TrialRecord run_trial(const TrialsConfig& cfg, int trial_id);

/// Records ordered by trial_id, identical for any worker count.
std::vector<TrialRecord> run_random_trials(const TrialsConfig& cfg);

struct TrialSummary {
  int total = 0;
  int ok = 0;
  int generation_failures = 0;
  int degenerate = 0;
  int suspect = 0;
  int reconstruction_failures = 0;
  long long candidate_attempts = 0;  // generation candidates across all trials
  double candidate_rejection_rate = 0.0;
  double spearman_cmi_nu = 0.0;
  double spearman_nu_bneg = 0.0;
  double spearman_cmi_bneg = 0.0;
};

TrialSummary summarize(const std::vector<TrialRecord>& records);

/// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

struct CheckResult {
  std::string name;
  bool passed = false;
  double value = 0.0;      // measured quantity (deviation, fraction, ...)
  double threshold = 0.0;  // bound it was compared against
  std::string detail;
};

/// Every cross-module invariant at fixed seeds.
std::vector<CheckResult> run_verification_suite();

}  // namespace steerlab
