#include "kdbench/report_io.hpp"

#include <cstdio>

namespace kdbench {
namespace {

using ojson = nlohmann::ordered_json;

ojson vec3(const Eigen::Vector3d& v) { return ojson::array({v[0], v[1], v[2]}); }

ojson vecx(const Eigen::VectorXd& v) {
  ojson out = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

const char* margin_mode(LimitMargin::Mode mode) {
  return mode == LimitMargin::Mode::absolute ? "absolute" : "fraction_of_range";
}

ojson verdict_to_json(const PointVerdict& v) {
  ojson out;
  out["index"] = v.index;
  out["position"] = vec3(v.position);
  out["status"] = to_string(v.status);
  out["sub_cause"] = to_string(v.sub_cause);
  if (v.sigma_min) out["sigma_min"] = *v.sigma_min;
  out["restarts_used"] = v.restarts_used;
  if (v.solution) out["solution"] = vecx(*v.solution);
  out["nudged"] = v.nudged;
  return out;
}

[[noreturn]] void bad(const std::string& what) { throw ReportParseError("malformed KD report: " + what); }

template <typename Json>
const Json& need(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) bad(std::string("missing field '") + key + "'");
  return obj.at(key);
}

template <typename Json>
Eigen::Vector3d read_vec3(const Json& v) {
  if (!v.is_array() || v.size() != 3) bad("expected a 3-vector");
  return {v[0].template get<double>(), v[1].template get<double>(), v[2].template get<double>()};
}

template <typename Json>
void erase_wall_time(Json& j) {
  if (j.is_object()) {
    j.erase("wall_time");
    for (auto& [key, value] : j.items()) erase_wall_time(value);
  } else if (j.is_array()) {
    for (auto& value : j) erase_wall_time(value);
  }
}

}  // namespace

ojson RunManifest::to_json() const {
  ojson out;
  out["subcommand"] = subcommand;
  out["inputs"] = inputs;
  out["parameters"] = parameters;
  out["seed"] = seed;
  out["outputs"] = outputs;
  out["tool_version"] = version;
  return out;
}

ojson config_to_json(const GridSpec& grid, const ClassifyConfig& config) {
  ojson out;
  out["grid"] = {{"side_length", grid.side_length},
                 {"resolution", grid.resolution},
                 {"axis_direction", vec3(grid.axis_direction)}};
  out["ik"] = {{"position_tolerance", config.ik.position_tolerance},
               {"orientation_tolerance", config.ik.orientation_tolerance},
               {"max_iterations", config.ik.max_iterations},
               {"restarts", config.ik.restarts},
               {"damping", config.ik.damping},
               {"step_scale", config.ik.step_scale}};
  out["screening"] = {{"epsilon", config.epsilon},
                      {"limit_margin",
                       {{"mode", margin_mode(config.limit_margin.mode())},
                        {"value", config.limit_margin.value()}}}};
  out["seed"] = config.ik.seed;
  return out;
}

ojson kd_report_to_json(const KDReport& r) {
  ojson out;
  out["format_version"] = kReportFormatVersion;
  out["chain_name"] = r.chain_name;
  out["dof"] = r.dof;
  out["kd"] = r.kd;
  out["n_total"] = r.n_total;
  out["n_valid"] = r.n_valid;
  out["n_singular"] = r.n_singular;
  out["n_unreachable"] = r.n_unreachable;
  out["config"] = config_to_json(r.grid, r.config);
  out["wall_time"] = r.wall_time;
  ojson verdicts = ojson::array();
  for (const auto& v : r.verdicts) verdicts.push_back(verdict_to_json(v));
  out["verdicts"] = std::move(verdicts);
  return out;
}

std::string serialize_kd_report(const KDReport& report, const std::optional<RunManifest>& manifest) {
  ojson doc;
  doc["format_version"] = kReportFormatVersion;
  if (manifest) doc["manifest"] = manifest->to_json();
  const ojson body = kd_report_to_json(report);
  for (auto& [key, value] : body.items()) {
    if (key != "format_version") doc[key] = value;
  }
  return doc.dump(1) + "\n";
}

std::string serialize_comparison(const Comparison& c, const std::optional<RunManifest>& manifest) {
  ojson doc;
  doc["format_version"] = kReportFormatVersion;
  if (manifest) doc["manifest"] = manifest->to_json();
  ojson rows = ojson::array();
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const ComparisonRow& r = c.rows[i];
    rows.push_back({{"rank", i + 1},
                    {"chain_name", r.chain_name},
                    {"dof", r.dof},
                    {"kd", r.kd},
                    {"n_valid", r.n_valid},
                    {"n_singular", r.n_singular},
                    {"n_unreachable", r.n_unreachable},
                    {"n_total", r.n_total}});
  }
  doc["summary"] = std::move(rows);
  ojson reports = ojson::array();
  for (const auto& r : c.reports) reports.push_back(kd_report_to_json(r));
  doc["reports"] = std::move(reports);
  doc["wall_time"] = c.wall_time;
  return doc.dump(1) + "\n";
}

KDReport parse_kd_report(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw ReportParseError(std::string("KD report is not valid JSON: ") + e.what());
  }
  try {
    if (need(doc, "format_version").get<int>() != kReportFormatVersion) bad("unsupported format_version");
    KDReport r;
    r.chain_name = need(doc, "chain_name").get<std::string>();
    r.dof = need(doc, "dof").get<std::size_t>();
    r.kd = need(doc, "kd").get<double>();
    r.n_total = need(doc, "n_total").get<std::size_t>();
    r.n_valid = need(doc, "n_valid").get<std::size_t>();
    r.n_singular = need(doc, "n_singular").get<std::size_t>();
    r.n_unreachable = need(doc, "n_unreachable").get<std::size_t>();
    if (doc.contains("wall_time")) r.wall_time = doc["wall_time"].get<double>();

    const auto& config = need(doc, "config");
    const auto& grid = need(config, "grid");
    r.grid.side_length = need(grid, "side_length").get<double>();
    r.grid.resolution = need(grid, "resolution").get<int>();
    r.grid.axis_direction = read_vec3(need(grid, "axis_direction"));
    const auto& ik = need(config, "ik");
    r.config.ik.position_tolerance = need(ik, "position_tolerance").get<double>();
    r.config.ik.orientation_tolerance = need(ik, "orientation_tolerance").get<double>();
    r.config.ik.max_iterations = need(ik, "max_iterations").get<int>();
    r.config.ik.restarts = need(ik, "restarts").get<int>();
    r.config.ik.damping = need(ik, "damping").get<double>();
    r.config.ik.step_scale = need(ik, "step_scale").get<double>();
    r.config.ik.seed = need(config, "seed").get<std::uint64_t>();
    const auto& screening = need(config, "screening");
    r.config.epsilon = need(screening, "epsilon").get<double>();
    const auto& margin = need(screening, "limit_margin");
    const double mv = need(margin, "value").get<double>();
    r.config.limit_margin = need(margin, "mode").get<std::string>() == "absolute"
                                ? LimitMargin::absolute(mv)
                                : LimitMargin::fraction_of_range(mv);

    if (r.grid.resolution < 2) bad("grid resolution below 2");
    const std::size_t res = static_cast<std::size_t>(r.grid.resolution);
    const auto& verdicts = need(doc, "verdicts");
    if (!verdicts.is_array() || verdicts.size() != res * res * res) {
      bad("verdict count does not match grid resolution");
    }
    for (const auto& vj : verdicts) {
      PointVerdict v;
      v.index = need(vj, "index").get<std::size_t>();
      v.position = read_vec3(need(vj, "position"));
      const auto status = point_status_from_string(need(vj, "status").get<std::string>());
      const auto cause = sub_cause_from_string(need(vj, "sub_cause").get<std::string>());
      if (!status || !cause) bad("unknown verdict status");
      v.status = *status;
      v.sub_cause = *cause;
      if (vj.contains("sigma_min")) v.sigma_min = vj["sigma_min"].get<double>();
      v.restarts_used = need(vj, "restarts_used").get<int>();
      if (vj.contains("solution")) {
        const auto& s = vj["solution"];
        JointState q(static_cast<Eigen::Index>(s.size()));
        for (std::size_t i = 0; i < s.size(); ++i) q[static_cast<Eigen::Index>(i)] = s[i].get<double>();
        v.solution = q;
      }
      if (vj.contains("nudged")) v.nudged = vj["nudged"].get<bool>();
      if (v.index != r.verdicts.size()) bad("verdicts are not in grid index order");
      r.verdicts.push_back(std::move(v));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    bad(e.what());
  }
}

std::string strip_wall_time(std::string_view text) {
  auto doc = ojson::parse(text.begin(), text.end());
  erase_wall_time(doc);
  return doc.dump(1);
}

std::string format_comparison_table(const Comparison& c, bool color) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%4s  %-24s %4s %8s %7s %9s %9s %7s\n", "rank", "chain", "dof", "kd",
                "valid", "singular", "unreach", "total");
  out += line;
  for (std::size_t i = 0; i < c.rows.size(); ++i) {
    const ComparisonRow& r = c.rows[i];
    char kd[32];
    std::snprintf(kd, sizeof kd, "%8.4f", r.kd);
    std::string kd_cell = kd;
    if (color) {
      const char* code = r.kd >= 0.75 ? "\033[32m" : (r.kd >= 0.4 ? "\033[33m" : "\033[31m");
      kd_cell = std::string(code) + kd + "\033[0m";
    }
    std::snprintf(line, sizeof line, "%4zu  %-24s %4zu %s %7zu %9zu %9zu %7zu\n", i + 1,
                  r.chain_name.c_str(), r.dof, kd_cell.c_str(), r.n_valid, r.n_singular, r.n_unreachable,
                  r.n_total);
    out += line;
  }
  return out;
}

std::string format_summary_line(const KDReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %.4f %zu/%zu", r.chain_name.c_str(), r.kd, r.n_valid, r.n_total);
  return buf;
}

}  // namespace kdbench
