#pragma once

// JSON, CSV and SVG output. Every number is written with 12 significant
// digits through std::to_chars, so files do not depend on the locale.

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "steerlab/experiments.hpp"

namespace steerlab {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest "%.12g"-style text for x; "nan", "inf", "-inf" for non-finite.
std::string format_number(double x);

/// x rounded to 12 significant digits (JSON numbers go through this so
/// the serializer prints them at the contract precision). Non-finite
/// values become null.
Json json_number(double x);

Json to_json(const ComplexMatrix& m);  // rows of [re, im] pairs
Json to_json(const RealMatrix& m);     // rows
Json to_json(const ThetaMatrix& theta);
Json to_json(const DensityMatrix& rho);
Json to_json(const EllipsoidGeometry& g);
Json to_json(const DynamicalMap& map, MapStatus status);
Json to_json(const MapReconstruction& rec);
Json to_json(const InfoReport& r);
Json to_json(const DomainCheck& d);
Json to_json(const DemoReport& r);
Json to_json(const ScanPoint& p);
Json to_json(const TrialRecord& r);
Json to_json(const TrialSummary& s);
Json to_json(const CheckResult& c);

/// Accepts {"dims": [...], "entries": [[[re, im], ...], ...]} with entries
/// as rows of [re, im] pairs or as a flat row-major list of pairs. Throws
/// IoError on malformed input.
ComplexMatrix complex_matrix_from_json(const Json& j);
DimList dims_from_json(const Json& j);
/// Validated state; throws StateError when the matrix is not a state.
DensityMatrix state_from_json(const Json& j);
ThetaMatrix theta_from_json(const Json& j);

inline constexpr const char* kTrialsCsvHeader =
    "trial_id,seed,c_rs,c_re,c_se,cmi,nu_max,b_neg,status";

std::string trials_csv(const std::vector<TrialRecord>& records);
std::string scan_csv(const std::vector<ScanPoint>& points);

struct ScatterSeries {
  std::vector<double> x;
  std::vector<double> y;
};

/// Self-contained SVG scatter plot with axes and tick labels.
std::string scatter_svg(const ScatterSeries& data, const std::string& x_label,
                        const std::string& y_label, const std::string& title);

/// Writes `contents` to `path`, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& contents);
std::string read_text(const std::filesystem::path& path);
Json read_json(const std::filesystem::path& path);

/// Pretty JSON with a trailing newline.
std::string dump(const Json& j);

/// Version strings recorded in run manifests.
Json build_info();

}  // namespace steerlab
