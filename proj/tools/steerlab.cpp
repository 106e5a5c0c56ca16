// steerlab command-line driver.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "steerlab/io.hpp"

namespace fs = std::filesystem;
using namespace steerlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariant = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 1;
  int states = 500;
  int unitaries = 100;
  double step = 0.1;
  int omega_grid = 64;
  int workers = default_workers();
  std::string out;
  std::string format = "csv";
  bool svg = false;
  double omega = 2.0;
  int domain_samples = 200;
  std::string config;
  std::string state;
  std::string unitary;
  std::string x;

  Json to_json(const std::string& command) const {
    Json j{{"command", command}};
    if (command == "demo") {
      j["seed"] = seed;
      j["omega"] = json_number(omega);
      j["domain_samples"] = domain_samples;
    } else if (command == "scan") {
      j["step"] = json_number(step);
      j["omega_grid"] = omega_grid;
      j["workers"] = workers;
      j["format"] = format;
      j["svg"] = svg;
    } else if (command == "trials") {
      j["seed"] = seed;
      j["states"] = states;
      j["unitaries"] = unitaries;
      j["workers"] = workers;
      j["format"] = format;
      j["svg"] = svg;
    }
    return j;
  }
};

// Options bound to RunConfig fields, keyed by their config-file name.
struct Bindings {
  std::map<std::string, CLI::Option*> options;
};

void add_common(CLI::App* sub, RunConfig& cfg, Bindings& b) {
  b.options["config"] = sub->add_option("--config", cfg.config, "JSON config file; flags override it");
  b.options["out"] = sub->add_option("--out", cfg.out, "output directory");
}

template <class T>
void apply_key(const Json& j, const char* key, T& field, const Bindings& b) {
  if (!j.contains(key)) return;
  const auto it = b.options.find(key);
  if (it != b.options.end() && it->second->count() > 0) return;
  try {
    field = j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw UsageError(std::string("config key \"") + key + "\": " + e.what());
  }
}

void load_config(RunConfig& cfg, const Bindings& b) {
  if (cfg.config.empty()) return;
  Json j;
  try {
    j = read_json(cfg.config);
  } catch (const IoError& e) {
    throw UsageError(e.what());
  }
  if (!j.is_object()) throw UsageError("config file must hold a JSON object");
  apply_key(j, "seed", cfg.seed, b);
  apply_key(j, "states", cfg.states, b);
  apply_key(j, "unitaries", cfg.unitaries, b);
  apply_key(j, "step", cfg.step, b);
  apply_key(j, "omega_grid", cfg.omega_grid, b);
  apply_key(j, "workers", cfg.workers, b);
  apply_key(j, "out", cfg.out, b);
  apply_key(j, "format", cfg.format, b);
  apply_key(j, "svg", cfg.svg, b);
  apply_key(j, "omega", cfg.omega, b);
  apply_key(j, "domain_samples", cfg.domain_samples, b);
}

fs::path out_dir(const RunConfig& cfg, const std::string& command) {
  return cfg.out.empty() ? fs::path("steerlab-out") / command : fs::path(cfg.out);
}

void write_manifest(const fs::path& dir, const RunConfig& cfg, const std::string& command,
                    const std::vector<std::string>& files) {
  Json m{{"config", cfg.to_json(command)}, {"versions", build_info()}, {"files", files}};
  write_text(dir / "manifest.json", dump(m));
}

void check_common(const RunConfig& cfg) {
  if (cfg.workers < 1) throw UsageError("--workers must be >= 1");
  if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format must be csv or json");
}

int run_demo(const RunConfig& cfg) {
  if (cfg.domain_samples < 1) throw UsageError("--domain-samples must be >= 1");
  GenerationConfig gen;
  gen.seed = cfg.seed;
  const DemoReport r = run_pairwise_demo(gen, cfg.omega, cfg.domain_samples);
  const fs::path dir = out_dir(cfg, "demo");
  write_text(dir / "demo.json", dump(to_json(r)));
  write_text(dir / "ellipsoids.json",
             dump(Json{{"initial", to_json(r.initial)}, {"final", to_json(r.final)}}));
  write_manifest(dir, cfg, "demo", {"demo.json", "ellipsoids.json"});

  std::cout << "seed " << r.seed << "  C_RS " << format_number(r.generation.c_rs) << "  C_RE "
            << format_number(r.generation.c_re) << "  C_SE " << format_number(r.generation.c_se) << "\n"
            << "map " << to_string(r.reconstruction.status);
  if (r.reconstruction.map) {
    const auto& ev = r.reconstruction.map->eigenvalues;
    std::cout << "  B eigenvalues " << format_number(ev(3)) << " " << format_number(ev(2)) << " "
              << format_number(ev(1)) << " " << format_number(ev(0)) << "  B_neg "
              << format_number(r.reconstruction.map->b_neg) << (r.cp ? "  CP" : "  NCP");
  }
  std::cout << "\nnu " << format_number(r.info.nu) << "  I(R:E|S) " << format_number(r.info.cmi)
            << "\nwrote " << dir.string() << "\n";
  return r.passed() ? kExitOk : kExitInvariant;
}

int run_scan(const RunConfig& cfg) {
  ScanConfig sc;
  sc.step = cfg.step;
  sc.omega_grid = cfg.omega_grid;
  sc.workers = cfg.workers;
  try {
    sc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto points = run_pqt_scan(sc);
  const fs::path dir = out_dir(cfg, "scan");
  std::vector<std::string> files;
  if (cfg.format == "csv") {
    write_text(dir / "scan.csv", scan_csv(points));
    files.push_back("scan.csv");
  } else {
    Json arr = Json::array();
    for (const auto& p : points) arr.push_back(to_json(p));
    write_text(dir / "scan.json", dump(arr));
    files.push_back("scan.json");
  }

  int psd = 0, ok_t = 0, ncp_t = 0, negative_nu = 0, ssa = 0;
  ScatterSeries pq, pt, qt, nu_bneg;
  for (const auto& p : points) {
    if (!p.psd) continue;
    ++psd;
    if (*p.nu < 0.0) ++negative_nu;
    if (*p.ssa_margin < -1e-9) ++ssa;
    if (*p.status == MapStatus::Ok && p.t != 0.0) {
      ++ok_t;
      if (!*p.cp) ++ncp_t;
    }
    pq.x.push_back(p.p), pq.y.push_back(p.q);
    pt.x.push_back(p.p), pt.y.push_back(p.t);
    qt.x.push_back(p.q), qt.y.push_back(p.t);
    if (p.b_neg && std::abs(*p.b_neg) <= kSuspectNegativity)
      nu_bneg.x.push_back(*p.nu), nu_bneg.y.push_back(*p.b_neg);
  }
  const double frac = ok_t > 0 ? static_cast<double>(ncp_t) / ok_t : 0.0;
  Json summary{{"points", points.size()},
               {"psd", psd},
               {"ok_with_t", ok_t},
               {"ncp_with_t", ncp_t},
               {"ncp_fraction", json_number(frac)},
               {"negative_nu", negative_nu},
               {"ssa_failures", ssa}};
  write_text(dir / "summary.json", dump(summary));
  files.push_back("summary.json");
  if (cfg.svg) {
    write_text(dir / "p_q.svg", scatter_svg(pq, "P", "Q", "PSD points: P vs Q"));
    write_text(dir / "p_t.svg", scatter_svg(pt, "P", "T", "PSD points: P vs T"));
    write_text(dir / "q_t.svg", scatter_svg(qt, "Q", "T", "PSD points: Q vs T"));
    write_text(dir / "nu_bneg.svg", scatter_svg(nu_bneg, "nu (bits)", "B_neg", "DPI violation vs negativity"));
    files.insert(files.end(), {"p_q.svg", "p_t.svg", "q_t.svg", "nu_bneg.svg"});
  }
  write_manifest(dir, cfg, "scan", files);
  std::cout << points.size() << " points, " << psd << " PSD, " << ok_t << " OK with T != 0, NCP fraction "
            << format_number(frac) << "\nwrote " << dir.string() << "\n";
  return (negative_nu == 0 && ssa == 0) ? kExitOk : kExitInvariant;
}

int run_trials_cmd(const RunConfig& cfg) {
  TrialsConfig tc;
  tc.master_seed = cfg.seed;
  tc.n_states = cfg.states;
  tc.n_unitaries = cfg.unitaries;
  tc.workers = cfg.workers;
  try {
    tc.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const auto records = run_random_trials(tc);
  const auto summary = summarize(records);
  const fs::path dir = out_dir(cfg, "trials");
  std::vector<std::string> files;
  if (cfg.format == "csv") {
    write_text(dir / "trials.csv", trials_csv(records));
    files.push_back("trials.csv");
  } else {
    Json arr = Json::array();
    for (const auto& r : records) arr.push_back(to_json(r));
    write_text(dir / "trials.json", dump(arr));
    files.push_back("trials.json");
  }
  write_text(dir / "summary.json", dump(to_json(summary)));
  files.push_back("summary.json");
  int bad = 0;
  ScatterSeries cmi_nu, cmi_b, nu_b;
  for (const auto& r : records) {
    if (r.status != TrialStatus::Ok) continue;
    if (!(r.b_neg >= -1e-9 && r.nu_max >= 0.0 && r.c_se <= 1e-6)) ++bad;
    cmi_nu.x.push_back(r.cmi), cmi_nu.y.push_back(r.nu_max);
    cmi_b.x.push_back(r.cmi), cmi_b.y.push_back(r.b_neg);
    nu_b.x.push_back(r.nu_max), nu_b.y.push_back(r.b_neg);
  }
  if (cfg.svg) {
    write_text(dir / "cmi_nu.svg", scatter_svg(cmi_nu, "I(R:E|S) (bits)", "nu (bits)", "CMI vs DPI violation"));
    write_text(dir / "cmi_bneg.svg", scatter_svg(cmi_b, "I(R:E|S) (bits)", "B_neg", "CMI vs negativity"));
    write_text(dir / "nu_bneg.svg", scatter_svg(nu_b, "nu (bits)", "B_neg", "DPI violation vs negativity"));
    files.insert(files.end(), {"cmi_nu.svg", "cmi_bneg.svg", "nu_bneg.svg"});
  }
  write_manifest(dir, cfg, "trials", files);
  std::cout << summary.total << " trials, " << summary.ok << " OK, " << summary.degenerate << " degenerate, "
            << summary.suspect << " suspect, " << summary.generation_failures << " generation failures\n"
            << "candidate rejection rate " << format_number(summary.candidate_rejection_rate) << "\n"
            << "spearman(cmi, nu) " << format_number(summary.spearman_cmi_nu) << "  spearman(nu, b_neg) "
            << format_number(summary.spearman_nu_bneg) << "\nwrote " << dir.string() << "\n";
  return bad == 0 ? kExitOk : kExitInvariant;
}

int run_verify(const RunConfig& cfg) {
  const auto checks = run_verification_suite();
  bool all = true;
  Json arr = Json::array();
  for (const auto& c : checks) {
    all = all && c.passed;
    std::cout << (c.passed ? "PASS  " : "FAIL  ") << c.name << "  (" << format_number(c.value) << " vs "
              << format_number(c.threshold) << ")" << (c.detail.empty() ? "" : "  " + c.detail) << "\n";
    arr.push_back(to_json(c));
  }
  if (!cfg.out.empty()) write_text(fs::path(cfg.out) / "verify.json", dump(arr));
  return all ? kExitOk : kExitInvariant;
}

Eigen::Vector3d parse_x(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--x expects three comma-separated numbers");
    }
  }
  if (v.size() != 3) throw UsageError("--x expects three comma-separated numbers");
  return {v[0], v[1], v[2]};
}

DensityMatrix load_state(const RunConfig& cfg) {
  if (cfg.state.empty()) throw UsageError("--state is required");
  return state_from_json(read_json(cfg.state));
}

void emit(const RunConfig& cfg, const std::string& name, const Json& j) {
  if (cfg.out.empty()) {
    std::cout << dump(j);
  } else {
    write_text(fs::path(cfg.out) / name, dump(j));
  }
}

int run_steer(const RunConfig& cfg) {
  const DensityMatrix rho = load_state(cfg);
  if (!(rho.dims() == kThreeQubits)) throw UsageError("steer expects a three-qubit state");
  const ThetaMatrix theta = theta_from_state(rho);
  Json j{{"theta", to_json(theta)},
         {"ellipsoid", to_json(steering_ellipsoid(theta))},
         {"domain_rank", domain_rank(theta)}};
  if (!cfg.x.empty()) {
    SteeringOperator x = SteeringOperator::from_bloch({0, 0, 0});
    try {
      x = SteeringOperator::from_bloch(parse_x(cfg.x));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    const DensityMatrix se = steer_se(rho, x);
    j["steered_se"] = to_json(se);
    const Eigen::Vector3d e = reduced_steer_s(theta, x);
    j["steered_s_bloch"] = Json::array({json_number(e(0)), json_number(e(1)), json_number(e(2))});
  }
  emit(cfg, "steer.json", j);
  return kExitOk;
}

int run_tomography(const RunConfig& cfg, bool omega_given) {
  const DensityMatrix rho = load_state(cfg);
  if (!(rho.dims() == kThreeQubits)) throw UsageError("tomography expects a three-qubit state");
  ComplexMatrix u;
  if (!cfg.unitary.empty()) {
    const Json uj = read_json(cfg.unitary);
    u = complex_matrix_from_json(uj.is_object() && uj.contains("entries") ? uj["entries"] : uj);
    if (u.rows() != 4 || u.cols() != 4) throw UsageError("unitary must be 4x4 on S (x) E");
  } else if (omega_given) {
    u = v_omega(cfg.omega);
  } else {
    throw UsageError("tomography needs --unitary FILE or --omega W");
  }
  const ThetaMatrix theta = theta_from_state(rho);
  const RealMatrix tt = evolve_theta(theta, u_coeffs(u, 2, 2));
  const MapReconstruction rec = reconstruct_map(theta, tt);
  Json j{{"map", to_json(rec)}, {"info", to_json(dpi_violation(rho, u))}, {"theta_tilde", to_json(tt)}};
  emit(cfg, "tomography.json", j);
  return (rec.status == MapStatus::ReconstructionFailure) ? kExitInvariant : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"steerlab: steering-based dynamical maps of open quantum systems"};
  app.set_version_flag("--version", STEERLAB_VERSION);
  app.require_subcommand(1);
  RunConfig cfg;
  Bindings b;

  auto* demo = app.add_subcommand("demo", "pairwise-entangled single-state demonstration");
  add_common(demo, cfg, b);
  b.options["seed"] = demo->add_option("--seed", cfg.seed, "generation seed");
  b.options["omega"] = demo->add_option("--omega", cfg.omega, "interaction strength of V(omega)");
  b.options["domain_samples"] =
      demo->add_option("--domain-samples", cfg.domain_samples, "steered states checked on the domain");

  auto* scan = app.add_subcommand("scan", "(P, Q, T) family scan with nu maximized over omega");
  add_common(scan, cfg, b);
  b.options["step"] = scan->add_option("--step", cfg.step, "grid step in (0, 0.25]");
  b.options["omega_grid"] = scan->add_option("--omega-grid", cfg.omega_grid, "coarse omega grid points");

  auto* trials = app.add_subcommand("trials", "random-state trials with nu maximized over unitaries");
  add_common(trials, cfg, b);
  b.options["seed"] = trials->add_option("--seed", cfg.seed, "master seed");
  b.options["states"] = trials->add_option("--states", cfg.states, "number of generated states");
  b.options["unitaries"] = trials->add_option("--unitaries", cfg.unitaries, "Haar unitaries per state");

  for (auto* sub : {scan, trials}) {
    b.options["workers"] = sub->add_option("--workers", cfg.workers, "worker threads");
    b.options["format"] = sub->add_option("--format", cfg.format, "csv or json");
    b.options["svg"] = sub->add_flag("--svg", cfg.svg, "also write SVG scatter plots");
  }

  auto* verify = app.add_subcommand("verify", "run the built-in invariant suite");
  verify->add_option("--out", cfg.out, "directory for verify.json");

  auto* steer = app.add_subcommand("steer", "steering set of a state file");
  steer->add_option("--state", cfg.state, "state JSON file")->required();
  steer->add_option("--x", cfg.x, "steering Bloch vector x1,x2,x3");
  steer->add_option("--out", cfg.out, "output directory (default: stdout)");

  auto* tomo = app.add_subcommand("tomography", "map induced on S by a unitary on S (x) E");
  tomo->add_option("--state", cfg.state, "state JSON file")->required();
  tomo->add_option("--unitary", cfg.unitary, "4x4 unitary JSON file");
  auto* tomo_omega = tomo->add_option("--omega", cfg.omega, "use V(omega) instead of a file");
  tomo->add_option("--out", cfg.out, "output directory (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  // The same binding key may belong to several subcommands; keep the one
  // that was actually parsed.
  for (auto* sub : app.get_subcommands()) {
    for (auto* opt : sub->get_options()) {
      for (auto& [key, bound] : b.options) {
        if (opt->get_name() == bound->get_name() && opt->count() > 0) bound = opt;
      }
    }
  }

  try {
    load_config(cfg, b);
    check_common(cfg);
    if (demo->parsed()) return run_demo(cfg);
    if (scan->parsed()) return run_scan(cfg);
    if (trials->parsed()) return run_trials_cmd(cfg);
    if (verify->parsed()) return run_verify(cfg);
    if (steer->parsed()) return run_steer(cfg);
    if (tomo->parsed()) return run_tomography(cfg, tomo_omega->count() > 0);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const StateError& e) {
    std::cerr << "invalid state: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariant;
  }
  return kExitUsage;
}
