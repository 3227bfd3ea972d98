#include "pinngm/eval/report.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <limits>
#include <ostream>
#include <sstream>

#include "pinngm/common/error.hpp"

namespace pinngm::eval {

namespace {

using nlohmann::json;

void put(json& j, const char* key, const std::optional<double>& v) {
  // Non-finite values are stored as the largest double so they still read back as diverged.
  if (!v) {
    j[key] = nullptr;
  } else {
    j[key] = std::isfinite(*v) ? *v : std::numeric_limits<double>::max();
  }
}

std::optional<double> get(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

constexpr const char* kPlaneNames[3] = {"xy", "xz", "yz"};

struct Field {
  const char* key;
  std::optional<double> MetricsReport::*member;
};

constexpr Field kFields[] = {
    {"planes_pct", &MetricsReport::planes_pct},
    {"interior_pct", &MetricsReport::interior_pct},
    {"exterior_pct", &MetricsReport::exterior_pct},
    {"extrapolation_pct", &MetricsReport::extrapolation_pct},
    {"surface_pct", &MetricsReport::surface_pct},
    {"accumulated_error_km", &MetricsReport::accumulated_error_km},
    {"final_position_error_km", &MetricsReport::final_position_error_km},
    {"propagation_time_s", &MetricsReport::propagation_time_s},
    {"regression_time_s", &MetricsReport::regression_time_s},
};

}  // namespace

std::string report_to_json(const MetricsReport& r) {
  json j;
  j["name"] = r.name;
  j["kind"] = r.kind;
  j["params"] = r.params;
  for (const auto& f : kFields) put(j, f.key, r.*f.member);
  j["planes_diverged"] = MetricsReport::diverged(r.planes_pct);
  j["interior_diverged"] = MetricsReport::diverged(r.interior_pct);
  j["exterior_diverged"] = MetricsReport::diverged(r.exterior_pct);
  j["extrapolation_diverged"] = MetricsReport::diverged(r.extrapolation_pct);
  j["surface_diverged"] = MetricsReport::diverged(r.surface_pct);
  j["diverged"] = r.any_diverged();
  for (std::size_t p = 0; p < 3; ++p) {
    const std::string pre = std::string("plane_") + kPlaneNames[p];
    const ErrorStats& s = r.plane_stats[p];
    j[pre + "_mean"] = std::isfinite(s.mean) ? s.mean : std::numeric_limits<double>::max();
    j[pre + "_std"] = std::isfinite(s.stddev) ? s.stddev : std::numeric_limits<double>::max();
    j[pre + "_max"] = std::isfinite(s.max) ? s.max : std::numeric_limits<double>::max();
    j[pre + "_points"] = s.used;
  }
  j["planes_excluded_interior"] = r.planes_excluded;
  j["interior_excluded"] = r.interior_excluded;
  return j.dump(2);
}

MetricsReport report_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    MetricsReport r;
    r.name = j.value("name", "");
    r.kind = j.value("kind", "");
    r.params = j.value("params", std::size_t{0});
    for (const auto& f : kFields) r.*f.member = get(j, f.key);
    for (std::size_t p = 0; p < 3; ++p) {
      const std::string pre = std::string("plane_") + kPlaneNames[p];
      r.plane_stats[p].mean = j.value(pre + "_mean", 0.0);
      r.plane_stats[p].stddev = j.value(pre + "_std", 0.0);
      r.plane_stats[p].max = j.value(pre + "_max", 0.0);
      r.plane_stats[p].used = j.value(pre + "_points", std::size_t{0});
    }
    r.planes_excluded = j.value("planes_excluded_interior", std::size_t{0});
    r.interior_excluded = j.value("interior_excluded", std::size_t{0});
    return r;
  } catch (const json::exception& e) {
    throw IoError(std::string("malformed metrics report: ") + e.what());
  }
}

void write_report(const std::string& path, const MetricsReport& report) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write report '" + path + "'");
  os << report_to_json(report) << '\n';
}

MetricsReport read_report(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read report '" + path + "'");
  std::stringstream ss;
  ss << is.rdbuf();
  return report_from_json(ss.str());
}

const std::vector<std::string>& compare_columns() {
  static const std::vector<std::string> cols = {
      "Planes Error[%]",   "Extrapol. Error[%]", "Exterior Error[%]",
      "Interior Error[%]", "Surface Error[%]",   "Position Error[km]",
      "Propagation Time[s]", "Params",           "Regression Time[s]"};
  return cols;
}

std::string format_percent(const std::optional<double>& v) {
  if (!v) return "NA";
  if (MetricsReport::diverged(v)) return "D";
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << *v;
  return os.str();
}

namespace {

std::string format_value(const std::optional<double>& v, int precision) {
  if (!v || !std::isfinite(*v)) return "NA";
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision) << *v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_compare_csv(std::ostream& os, const std::vector<MetricsReport>& reports) {
  os << "Model";
  for (const auto& c : compare_columns()) os << ',' << csv_field(c);
  os << '\n';
  for (const auto& r : reports) {
    os << csv_field(r.name.empty() ? r.kind : r.name) << ',' << format_percent(r.planes_pct) << ','
       << format_percent(r.extrapolation_pct) << ',' << format_percent(r.exterior_pct) << ','
       << format_percent(r.interior_pct) << ',' << format_percent(r.surface_pct) << ','
       << format_value(r.accumulated_error_km, 2) << ',' << format_value(r.propagation_time_s, 3)
       << ',' << r.params << ',' << format_value(r.regression_time_s, 3) << '\n';
  }
}

}  // namespace pinngm::eval
