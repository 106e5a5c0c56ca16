#include "steerlab/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace steerlab {

namespace {

std::string to_chars_g(double x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // also folds -0
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_same_v<T, bool>) return *v ? "true" : "false";
  else if constexpr (std::is_same_v<T, MapStatus>) return to_string(*v);
  else return format_number(*v);
}

Json vec_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(json_number(v(i)));
  return out;
}

double number_at(const Json& j, const char* what) {
  if (!j.is_number()) throw IoError(std::string("expected a number in ") + what);
  return j.get<double>();
}

cplx pair_at(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw IoError("complex entries must be [re, im] pairs");
  return {number_at(j[0], "entry"), number_at(j[1], "entry")};
}

}  // namespace

std::string format_number(double x) { return to_chars_g(x, 12); }

Json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  const std::string s = format_number(x);
  double back = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), back);
  return back;
}

Json to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back(Json::array({json_number(m(r, c).real()), json_number(m(r, c).imag())}));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const RealMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_json(m.row(r).transpose()));
  return rows;
}

Json to_json(const ThetaMatrix& theta) {
  Json entries = Json::array();
  for (Eigen::Index r = 0; r < theta.entries.rows(); ++r)
    for (Eigen::Index c = 0; c < theta.entries.cols(); ++c)
      entries.push_back(json_number(theta.entries(r, c)));
  return Json{{"n_r", theta.n_r},
              {"n_s", theta.n_s},
              {"n_e", theta.n_e},
              {"a", vec_json(theta.a())},
              {"entries", std::move(entries)}};
}

Json to_json(const DensityMatrix& rho) {
  Json dims = Json::array();
  for (std::size_t i = 0; i < rho.dims().size(); ++i) dims.push_back(rho.dims()[i]);
  return Json{{"dims", std::move(dims)}, {"entries", to_json(rho.matrix())}};
}

Json to_json(const EllipsoidGeometry& g) {
  Json axes = Json::array();
  for (int c = 0; c < 3; ++c) axes.push_back(vec_json(g.axes.col(c)));
  return Json{{"center", vec_json(g.center)},
              {"semiaxes", vec_json(g.semiaxes)},
              {"axes", std::move(axes)}};
}

Json to_json(const DynamicalMap& map, MapStatus status) {
  return Json{{"A", to_json(map.a)},
              {"B", to_json(map.b)},
              {"eigenvalues", vec_json(map.eigenvalues)},
              {"b_neg", json_number(map.b_neg)},
              {"cp", is_cp(map)},
              {"status", to_string(status)}};
}

Json to_json(const MapReconstruction& rec) {
  Json j = rec.map ? to_json(*rec.map, rec.status) : Json{{"status", to_string(rec.status)}};
  j["probe_rank"] = rec.probe_rank;
  j["detail"] = rec.detail;
  return j;
}

Json to_json(const InfoReport& r) {
  return Json{{"cmi", json_number(r.cmi)},
              {"mi_before", json_number(r.mi_before)},
              {"mi_after", json_number(r.mi_after)},
              {"nu", json_number(r.nu)}};
}

Json to_json(const DomainCheck& d) {
  return Json{{"samples", d.samples},
              {"min_eigenvalue", json_number(d.min_eigenvalue)},
              {"max_oracle_error", json_number(d.max_oracle_error)},
              {"passed", d.passed}};
}

Json to_json(const DemoReport& r) {
  return Json{{"seed", r.seed},
              {"omega", json_number(r.omega)},
              {"generation",
               {{"c_rs", json_number(r.generation.c_rs)},
                {"c_re", json_number(r.generation.c_re)},
                {"c_se", json_number(r.generation.c_se)},
                {"attempts", r.generation.attempts},
                {"singular_rejections", r.generation.singular_rejections}}},
              {"theta", to_json(r.theta)},
              {"theta_tilde", to_json(r.theta_tilde)},
              {"ellipsoids", {{"initial", to_json(r.initial)}, {"final", to_json(r.final)}}},
              {"map", to_json(r.reconstruction)},
              {"cp", r.cp},
              {"info", to_json(r.info)},
              {"domain", to_json(r.domain)},
              {"trace_b_error", json_number(r.trace_b_error)},
              {"b_hermiticity", json_number(r.b_hermiticity)},
              {"passed", r.passed()}};
}

Json to_json(const ScanPoint& p) {
  Json j{{"P", json_number(p.p)},
         {"Q", json_number(p.q)},
         {"T", json_number(p.t)},
         {"psd", p.psd},
         {"min_eigenvalue", json_number(p.min_eigenvalue)}};
  if (!p.psd) return j;
  j["omega_star"] = json_number(*p.omega_star);
  j["nu"] = json_number(*p.nu);
  j["cmi"] = json_number(*p.cmi);
  j["mi_before"] = json_number(*p.mi_before);
  j["mi_after"] = json_number(*p.mi_after);
  j["status"] = to_string(*p.status);
  j["extended"] = p.extended;
  if (p.b_neg) {
    j["b_neg"] = json_number(*p.b_neg);
    j["cp"] = *p.cp;
  }
  return j;
}

Json to_json(const TrialRecord& r) {
  return Json{{"trial_id", r.trial_id},
              {"seed", r.seed},
              {"c_rs", json_number(r.c_rs)},
              {"c_re", json_number(r.c_re)},
              {"c_se", json_number(r.c_se)},
              {"cmi", json_number(r.cmi)},
              {"nu_max", json_number(r.nu_max)},
              {"b_neg", json_number(r.b_neg)},
              {"status", to_string(r.status)},
              {"attempts", r.attempts}};
}

Json to_json(const TrialSummary& s) {
  return Json{{"total", s.total},
              {"ok", s.ok},
              {"generation_failures", s.generation_failures},
              {"degenerate", s.degenerate},
              {"suspect", s.suspect},
              {"reconstruction_failures", s.reconstruction_failures},
              {"candidate_attempts", s.candidate_attempts},
              {"candidate_rejection_rate", json_number(s.candidate_rejection_rate)},
              {"spearman_cmi_nu", json_number(s.spearman_cmi_nu)},
              {"spearman_nu_bneg", json_number(s.spearman_nu_bneg)},
              {"spearman_cmi_bneg", json_number(s.spearman_cmi_bneg)}};
}

Json to_json(const CheckResult& c) {
  return Json{{"name", c.name},
              {"passed", c.passed},
              {"value", json_number(c.value)},
              {"threshold", json_number(c.threshold)},
              {"detail", c.detail}};
}

ComplexMatrix complex_matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw IoError("matrix must be a non-empty array");
  if (j[0].is_array() && !j[0].empty() && j[0][0].is_array()) {
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (j[r].size() != static_cast<std::size_t>(cols)) throw IoError("ragged matrix rows");
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = pair_at(j[r][c]);
    }
    return m;
  }
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(j.size()))));
  if (n * n != static_cast<Eigen::Index>(j.size())) throw IoError("flat entry list is not square");
  ComplexMatrix m(n, n);
  for (Eigen::Index k = 0; k < n * n; ++k) m(k / n, k % n) = pair_at(j[k]);
  return m;
}

DimList dims_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) throw IoError("dims must be a non-empty array");
  std::vector<int> d;
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw IoError("dims must be integers");
    d.push_back(x.get<int>());
  }
  try {
    return DimList(d);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
}

DensityMatrix state_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dims") || !j.contains("entries"))
    throw IoError("state needs \"dims\" and \"entries\"");
  return DensityMatrix(complex_matrix_from_json(j["entries"]), dims_from_json(j["dims"]));
}

ThetaMatrix theta_from_json(const Json& j) {
  for (const char* key : {"n_r", "n_s", "n_e", "entries"})
    if (!j.contains(key)) throw IoError(std::string("theta missing \"") + key + "\"");
  ThetaMatrix theta(j["n_r"].get<int>(), j["n_s"].get<int>(), j["n_e"].get<int>());
  const Json& e = j["entries"];
  if (!e.is_array() || e.size() != static_cast<std::size_t>(theta.rows() * theta.cols()))
    throw IoError("theta entries have the wrong length");
  for (int k = 0; k < theta.rows() * theta.cols(); ++k)
    theta.entries(k / theta.cols(), k % theta.cols()) = number_at(e[k], "theta");
  return theta;
}

std::string trials_csv(const std::vector<TrialRecord>& records) {
  std::string out = std::string(kTrialsCsvHeader) + "\n";
  for (const auto& r : records) {
    out += std::to_string(r.trial_id) + "," + std::to_string(r.seed) + "," + format_number(r.c_rs) +
           "," + format_number(r.c_re) + "," + format_number(r.c_se) + "," + format_number(r.cmi) +
           "," + format_number(r.nu_max) + "," + format_number(r.b_neg) + "," + to_string(r.status) +
           "\n";
  }
  return out;
}

std::string scan_csv(const std::vector<ScanPoint>& points) {
  std::string out =
      "P,Q,T,psd,min_eigenvalue,omega_star,nu,cmi,mi_before,mi_after,status,extended,b_neg,cp\n";
  for (const auto& p : points) {
    out += format_number(p.p) + "," + format_number(p.q) + "," + format_number(p.t) + "," +
           (p.psd ? "true" : "false") + "," + format_number(p.min_eigenvalue) + "," +
           opt(p.omega_star) + "," + opt(p.nu) + "," + opt(p.cmi) + "," + opt(p.mi_before) + "," +
           opt(p.mi_after) + "," + opt(p.status) + "," + (p.psd ? (p.extended ? "true" : "false") : "") +
           "," + opt(p.b_neg) + "," + opt(p.cp) + "\n";
  }
  return out;
}

std::string scatter_svg(const ScatterSeries& data, const std::string& x_label,
                        const std::string& y_label, const std::string& title) {
  if (data.x.size() != data.y.size()) throw std::invalid_argument("scatter_svg: x/y size mismatch");
  constexpr double width = 480, height = 400, left = 70, right = 20, top = 40, bottom = 60;
  auto range = [](const std::vector<double>& v) {
    double lo = 0.0, hi = 1.0;
    bool first = true;
    for (double x : v) {
      if (!std::isfinite(x)) continue;
      if (first) lo = hi = x, first = false;
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    const double pad = 0.05 * (hi - lo);
    return std::pair{lo - pad, hi + pad};
  };
  const auto [x0, x1] = range(data.x);
  const auto [y0, y1] = range(data.y);
  const double pw = width - left - right, ph = height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return top + (y1 - y) / (y1 - y0) * ph; };
  auto f = [](double v) { return to_chars_g(v, 6); };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << f(width) << "\" height=\""
     << f(height) << "\" viewBox=\"0 0 " << f(width) << " " << f(height) << "\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << f(width) << "\" height=\"" << f(height)
     << "\" fill=\"white\"/>\n"
     << "<text x=\"" << f(width / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">"
     << xml_escape(title) << "</text>\n"
     << "<rect x=\"" << f(left) << "\" y=\"" << f(top) << "\" width=\"" << f(pw) << "\" height=\""
     << f(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    os << "<text x=\"" << f(px(xv)) << "\" y=\"" << f(top + ph + 18)
       << "\" text-anchor=\"middle\" font-size=\"10\">" << to_chars_g(xv, 3) << "</text>\n"
       << "<text x=\"" << f(left - 6) << "\" y=\"" << f(py(yv) + 3)
       << "\" text-anchor=\"end\" font-size=\"10\">" << to_chars_g(yv, 3) << "</text>\n";
  }
  os << "<text x=\"" << f(left + pw / 2) << "\" y=\"" << f(height - 16)
     << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(x_label) << "</text>\n"
     << "<text x=\"16\" y=\"" << f(top + ph / 2) << "\" text-anchor=\"middle\" font-size=\"12\" "
     << "transform=\"rotate(-90 16 " << f(top + ph / 2) << ")\">" << xml_escape(y_label)
     << "</text>\n<g fill=\"steelblue\">\n";
  for (std::size_t i = 0; i < data.x.size(); ++i) {
    if (!std::isfinite(data.x[i]) || !std::isfinite(data.y[i])) continue;
    os << "<circle cx=\"" << f(px(data.x[i])) << "\" cy=\"" << f(py(data.y[i])) << "\" r=\"2\"/>\n";
  }
  os << "</g>\n</svg>\n";
  return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << contents;
  if (!f) throw IoError("write failed for " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

Json read_json(const std::filesystem::path& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::parse_error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json build_info() {
  return Json{{"steerlab", STEERLAB_VERSION},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                            "." + std::to_string(EIGEN_MINOR_VERSION)},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
              {"compiler", __VERSION__},
              {"cxx_standard", static_cast<long>(__cplusplus)}};
}

}  // namespace steerlab
