// Acceptance run: one line per criterion, nonzero exit if any fails.
//
// Usage: steerlab_acceptance <path-to-steerlab-cli> <scratch-dir>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <sstream>

#include "steerlab/io.hpp"
#include "support.hpp"

using namespace testing;
namespace fs = std::filesystem;

namespace {

struct Line {
  int id;
  bool pass;
  std::string text;
};

std::vector<Line> g_lines;

void report(int id, bool pass, const std::string& text) {
  g_lines.push_back({id, pass, text});
  std::cout << (pass ? "PASS" : "FAIL") << "  criterion " << id << ": " << text << std::endl;
}

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// Full-matrix check of one reconstructed map on `samples` steered states:
// returns (min eigenvalue of mapped states, max deviation from the oracle).
std::pair<double, double> domain_scan(const DensityMatrix& rho, const ComplexMatrix& u, const DynamicalMap& map,
                                      int samples, Rng& rng) {
  double min_eig = 1.0, worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto x = sample_X(rng, i % 2 ? SampleMode::Boundary : SampleMode::Interior);
    const ComplexMatrix e = kron(x.op(2), ComplexMatrix::Identity(4, 4));
    ComplexMatrix s_in = partial_trace(e * rho.matrix(), kThreeQubits, {1});
    s_in /= s_in.trace();
    ComplexMatrix out = apply_map(map, s_in);
    worst = std::max(worst, max_abs_diff(out, oracle_evolved_s(rho, u, x)));
    out = 0.5 * (out + out.adjoint());
    min_eig = std::min(min_eig, herm_eigenvalues(out)(0));
  }
  return {min_eig, worst};
}

struct MapCase {
  DensityMatrix rho;
  ComplexMatrix u;
  DynamicalMap map;
};

void criterion_1() {
  Timer t;
  Rng rng(1001);
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto rho = random_canonical_state(rng);
    const ComplexMatrix u = haar_unitary(4, rng);
    const auto theta = theta_from_state(rho);
    const RealMatrix tt = evolve_theta(theta, u_coeffs(u, 2, 2));
    for (int k = 0; k < 50; ++k) {
      const auto x = sample_X(rng, k % 2 ? SampleMode::Boundary : SampleMode::Interior);
      const Eigen::Vector3d e = tt * x.coeffs();
      const ComplexMatrix predicted =
          0.5 * (pauli::identity() + e(0) * pauli::x() + e(1) * pauli::y() + e(2) * pauli::z());
      worst = std::max(worst, max_abs_diff(predicted, oracle_evolved_s(rho, u, x)));
    }
  }
  const double secs = t.seconds();
  report(1, worst < 1e-10 && secs < 60.0,
         "keystone equivalence over 200 (state, U) pairs x 50 X: max deviation " + sci(worst) +
             " (< 1e-10), " + sci(secs) + " s (< 60 s)");
}

void criterion_2() {
  Rng rng(1002);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto theta = theta_from_state(random_canonical_state(rng));
    const auto x = sample_X(rng, SampleMode::Interior);
    const RealVector e = theta.steer(x.coeffs());
    for (int w = 0; w < 100; ++w) {
      const double omega = w * std::numbers::pi / 100.0;
      const RealMatrix tt = evolve_theta(theta, u_coeffs(v_omega(omega), 2, 2));
      worst = std::max(worst, (bloch_closed_form(e, omega) - tt * x.coeffs()).cwiseAbs().maxCoeff());
    }
  }
  report(2, worst < 1e-12,
         "closed form vs general law, 100 omega x 50 states: max deviation " + sci(worst) + " (< 1e-12)");
}

void criterion_3() {
  const Eigen::Vector4d lam(-0.5704, -0.0422, 0.2288, 2.3838);
  const double sum_err = std::abs(lam.sum() - 2.0);
  const double neg = b_negativity(lam);
  report(3, sum_err < 1e-3 && std::abs(neg - 1.2252) < 1e-4,
         "quoted spectrum sums to 2 (error " + sci(sum_err) + "), B_neg = " + format_number(neg) +
             " (1.2252 +- 1e-4)");
}

std::vector<MapCase> criterion_4() {
  std::vector<MapCase> maps;
  Rng rng(1004);
  int product_cp = 0, product_total = 0;
  for (int i = 0; i < 100; ++i) {
    const auto rho = bell_rs_with(random_state(DimList{2}, rng).matrix());
    const ComplexMatrix u = haar_unitary(4, rng);
    const auto rec = induced_map(theta_from_state(rho), u);
    ++product_total;
    if (rec.ok() && is_cp(*rec.map)) ++product_cp;
    if (rec.map) maps.push_back({rho, u, *rec.map});
  }
  int markov_ok = 0, markov_total = 0;
  double worst_nu = 0.0;
  for (int i = 0; i < 100; ++i) {
    const auto rho = random_markov_state(rng);
    const ComplexMatrix u = haar_unitary(4, rng);
    const auto rec = induced_map(theta_from_state(rho), u);
    Rng search(derive_seed(1004, static_cast<std::uint64_t>(i)));
    const double nu = std::max(dpi_violation(rho, u).nu, maximize_nu_over_unitaries(rho, 10, search).report.nu);
    worst_nu = std::max(worst_nu, nu);
    ++markov_total;
    if (rec.map && is_cp(*rec.map) && nu <= 1e-9) ++markov_ok;
    if (rec.map) maps.push_back({rho, u, *rec.map});
  }
  report(4, product_cp == product_total && markov_ok == markov_total,
         "CP for product SE: " + std::to_string(product_cp) + "/" + std::to_string(product_total) +
             "; Markov chains CP with nu <= 1e-9: " + std::to_string(markov_ok) + "/" +
             std::to_string(markov_total) + " (max nu " + sci(worst_nu) + ")");
  return maps;
}

void criterion_5(std::vector<MapCase> maps) {
  int ncp = 0;
  for (std::uint64_t seed = 1; ncp < 50 && seed < 2000; ++seed) {
    GenerationConfig cfg;
    cfg.seed = seed;
    const auto g = gen_pairwise_entangled(cfg);
    const ComplexMatrix v = v_omega(2.0);
    const auto rec = induced_map(theta_from_state(g.rho), v);
    if (rec.ok() && !is_cp(*rec.map)) {
      maps.push_back({g.rho, v, *rec.map});
      ++ncp;
    }
  }
  Rng rng(1005);
  double min_eig = 1.0, worst_oracle = 0.0, worst_trace = 0.0, worst_herm = 0.0;
  for (const auto& c : maps) {
    const auto [m, w] = domain_scan(c.rho, c.u, c.map, 200, rng);
    min_eig = std::min(min_eig, m);
    worst_oracle = std::max(worst_oracle, w);
    worst_trace = std::max(worst_trace, std::abs(c.map.b.trace() - cplx(2.0)));
    worst_herm = std::max(worst_herm, hermiticity_defect(c.map.b));
  }
  report(5,
         ncp == 50 && min_eig >= -1e-9 && worst_trace <= 1e-8 && worst_herm <= 1e-8 && worst_oracle <= 1e-8,
         std::to_string(maps.size()) + " maps (" + std::to_string(ncp) + " NCP) x 200 domain states: min eigenvalue " +
             sci(min_eig) + " (>= -1e-9), |tr B - 2| " + sci(worst_trace) + ", B Hermiticity " + sci(worst_herm) +
             " (<= 1e-8), oracle deviation " + sci(worst_oracle));
}

void criterion_6() {
  int eligible = 0, detected = 0;
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    GenerationConfig cfg;
    cfg.seed = seed;
    const auto r = run_pairwise_demo(cfg, 2.0, 20);
    if (r.generation.c_rs <= 0.2) continue;
    ++eligible;
    if (r.reconstruction.ok() && r.reconstruction.map->b_neg > 1e-3) ++detected;
  }
  const double frac = eligible ? static_cast<double>(detected) / eligible : 0.0;
  report(6, eligible > 0 && frac >= 0.9,
         "demo seeds 1..400 with C_RS > 0.2: " + std::to_string(detected) + "/" + std::to_string(eligible) +
             " have B_neg > 1e-3 (fraction " + format_number(frac) + ", >= 0.9)");
}

void criterion_7() {
  Timer t;
  ScanConfig cfg;
  cfg.step = 0.1;
  cfg.omega_grid = 64;
  cfg.workers = default_workers();
  const auto points = run_pqt_scan(cfg);
  const double secs = t.seconds();
  int psd = 0, ok_t = 0, ncp = 0, neg_nu = 0, ssa = 0, extended = 0;
  for (const auto& p : points) {
    if (!p.psd) continue;
    ++psd;
    if (*p.nu < 0.0) ++neg_nu;
    // SSA recomputed from the state rather than read from the record.
    if (cond_mutual_info(pqt_state(p.p, p.q, p.t)) < -1e-9) ++ssa;
    if (*p.status == MapStatus::Ok && p.t != 0.0) {
      ++ok_t;
      if (p.extended) ++extended;
      if (*p.b_neg > 1e-7 && !*p.cp) ++ncp;
    }
  }
  const double frac = ok_t ? static_cast<double>(ncp) / ok_t : 0.0;
  report(7, secs < 600.0 && ok_t > 0 && frac > 0.9 && neg_nu == 0 && ssa == 0,
         "scan step 0.1: " + std::to_string(points.size()) + " points, " + std::to_string(psd) + " PSD, NCP " +
             std::to_string(ncp) + "/" + std::to_string(ok_t) + " OK points with T != 0 (" +
             std::to_string(extended) + " via extend_map; fraction " + format_number(frac) +
             ", > 0.9), nu < 0: " + std::to_string(neg_nu) + ", SSA failures: " + std::to_string(ssa) + ", " +
             sci(secs) + " s (< 600 s)");
}

void criterion_8() {
  Timer t;
  TrialsConfig cfg;
  cfg.master_seed = 1;
  cfg.n_states = 500;
  cfg.n_unitaries = 100;
  cfg.workers = default_workers();
  const auto records = run_random_trials(cfg);
  const double secs = t.seconds();
  // Rank correlations recomputed here over OK records.
  std::vector<double> cmi, nu, bneg;
  for (const auto& r : records) {
    if (r.status != TrialStatus::Ok) continue;
    cmi.push_back(r.cmi);
    nu.push_back(r.nu_max);
    bneg.push_back(r.b_neg);
  }
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      for (std::size_t k = i; k <= j; ++k) r[idx[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
      i = j + 1;
    }
    return r;
  };
  auto pearson = [](const std::vector<double>& a, const std::vector<double>& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) ma += a[i] / n, mb += b[i] / n;
    double sab = 0, saa = 0, sbb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      sab += (a[i] - ma) * (b[i] - mb);
      saa += (a[i] - ma) * (a[i] - ma);
      sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
  };
  const double r1 = pearson(ranks(cmi), ranks(nu));
  const double r2 = pearson(ranks(nu), ranks(bneg));
  const auto s = summarize(records);
  report(8, r1 > 0.2 && r2 > 0.2 && secs < 1800.0,
         "500 states x 100 unitaries (" + std::to_string(cfg.workers) + " workers): " + std::to_string(s.ok) +
             " OK, " + std::to_string(s.degenerate) + " degenerate, " + std::to_string(s.suspect) +
             " suspect; spearman(cmi, nu_max) " + format_number(r1) + ", spearman(nu_max, b_neg) " +
             format_number(r2) + " (> 0.2); candidate rejection " + format_number(s.candidate_rejection_rate) +
             "; " + sci(secs) + " s (< 1800 s)");
}

void criterion_9() {
  std::vector<std::string> failed;
  auto check = [&](bool ok, const char* name) {
    if (!ok) failed.push_back(name);
  };
  const DimList two{2, 2};
  check(std::abs(vn_entropy(DensityMatrix(0.5 * pauli::identity(), DimList{2})) - 1.0) < 1e-12, "S(1/2)");
  Rng rng(1009);
  check(std::abs(vn_entropy(random_pure_state(two, rng))) < 1e-10, "S(pure)");
  check(std::abs(vn_entropy(diag2(0.75, 0.25)) - (-0.75 * std::log2(0.75) - 0.25 * std::log2(0.25))) < 1e-12,
        "S(3/4,1/4)");
  const DensityMatrix bell(projector(bell_phi_plus()), two);
  check(std::abs(mutual_info(bell, {{0}, {1}}) - 2.0) < 1e-10, "I(Bell)");
  ComplexMatrix cc = ComplexMatrix::Zero(4, 4);
  cc(0, 0) = cc(3, 3) = 0.5;
  check(std::abs(mutual_info(DensityMatrix(cc, two), {{0}, {1}}) - 1.0) < 1e-10, "I(classical)");
  const DensityMatrix prod(kron(random_state(DimList{2}, rng).matrix(), random_state(DimList{2}, rng).matrix()), two);
  check(std::abs(mutual_info(prod, {{0}, {1}})) < 1e-10, "I(product)");
  check(std::abs(cond_mutual_info(DensityMatrix(projector(ghz()), kThreeQubits)) - 1.0) < 1e-10, "CMI(GHZ)");
  check(std::abs(cond_mutual_info(random_markov_state(rng))) < 1e-9, "CMI(Markov)");
  check(std::abs(concurrence(bell) - 1.0) < 1e-10, "C(Bell)");
  check(concurrence(prod) < 1e-6, "C(product)");
  const ComplexMatrix w = 0.5 * projector(singlet()) + 0.5 * ComplexMatrix::Identity(4, 4) / 4.0;
  check(std::abs(concurrence(DensityMatrix(w, two)) - 0.25) < 1e-10, "C(Werner 0.5)");
  check(!ppt_separable(bell), "PPT(Bell)");
  check(ppt_separable(DensityMatrix(ComplexMatrix::Identity(4, 4) / 4.0, two)), "PPT(mixed)");
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto r = random_state(two, rng);
    if ((concurrence(r) > 1e-6) == !ppt_separable(r)) ++agree;
  }
  check(agree == 1000, "PPT vs concurrence");
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) worst = std::min(worst, cond_mutual_info(random_state(kThreeQubits, rng)));
  check(worst >= -1e-9, "SSA");
  std::string text = "information-measure examples " + std::to_string(15 - failed.size()) + "/15, SSA min over 1000 states " +
                     sci(worst) + " (>= -1e-9)";
  for (const auto& f : failed) text += "; failed " + f;
  report(9, failed.empty(), text);
}

int run(const std::string& cmd) {
  const int status = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = read_text(e.path());
  return files;
}

void criterion_10(const std::string& cli, const fs::path& scratch) {
  fs::remove_all(scratch);
  fs::create_directories(scratch);
  const fs::path state = scratch / "state.json";
  {
    GenerationConfig cfg;
    cfg.seed = 5;
    write_text(state, dump(to_json(gen_pairwise_entangled(cfg).rho)));
  }
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"demo", "demo --seed 3 --domain-samples 50"},
      {"scan", "scan --step 0.25 --omega-grid 16 --svg"},
      {"scan_json", "scan --step 0.25 --omega-grid 16 --format json --workers 2"},
      {"trials", "trials --states 10 --unitaries 5 --seed 7 --svg"},
      {"trials_json", "trials --states 6 --unitaries 4 --seed 9 --format json --workers 3"},
      {"verify", "verify"},
      {"steer", "steer --state " + state.string() + " --x 0.1,0.2,0.3"},
      {"tomography", "tomography --state " + state.string() + " --omega 2"},
  };
  int identical = 0, nonempty = 0;
  std::string problems;
  for (const auto& [name, args] : commands) {
    std::array<std::map<std::string, std::string>, 2> runs;
    for (int k = 0; k < 2; ++k) {
      const fs::path out = scratch / (name + "_" + std::to_string(k));
      const int code = run(cli + " " + args + " --out " + out.string());
      if (code != 0) problems += " " + name + " exit " + std::to_string(code) + ";";
      runs[k] = snapshot(out);
    }
    if (!runs[0].empty()) ++nonempty;
    if (runs[0] == runs[1]) ++identical;
    else problems += " " + name + " differs;";
  }
  const int n = static_cast<int>(commands.size());
  report(10, identical == n && nonempty == n && problems.empty(),
         std::to_string(identical) + "/" + std::to_string(n) +
             " subcommand runs byte-identical on re-run (demo, scan, trials, verify, steer, tomography)" + problems);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: steerlab_acceptance <steerlab-cli> <scratch-dir>\n";
    return 2;
  }
  auto guarded = [](int id, auto&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      report(id, false, std::string("exception: ") + e.what());
    }
  };
  std::vector<MapCase> maps;
  guarded(1, criterion_1);
  guarded(2, criterion_2);
  guarded(3, criterion_3);
  guarded(4, [&] { maps = criterion_4(); });
  guarded(5, [&] { criterion_5(maps); });
  guarded(6, criterion_6);
  guarded(7, criterion_7);
  guarded(8, criterion_8);
  guarded(9, criterion_9);
  guarded(10, [&] { criterion_10(argv[1], argv[2]); });
  int failed = 0;
  for (const auto& l : g_lines) failed += l.pass ? 0 : 1;
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << (g_lines.size() - failed) << "/" << g_lines.size() << "\n";
  return failed ? 1 : 0;
}
