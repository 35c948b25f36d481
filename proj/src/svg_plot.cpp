#include "kdbench/svg_plot.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "kdbench/errors.hpp"

namespace kdbench {
namespace {

constexpr double kWidth = 520.0;
constexpr double kHeight = 560.0;
constexpr double kLeft = 90.0;
constexpr double kTop = 70.0;
constexpr double kPlot = 380.0;

const char* kAxisNames[3] = {"x", "y", "z"};

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

const char* color_for(PointStatus s) {
  switch (s) {
    case PointStatus::valid: return "#2ca02c";
    case PointStatus::near_singular: return "#1f77b4";
    case PointStatus::unreachable: return "#d62728";
  }
  return "#000000";
}

std::string xml_escape(const std::string& in) {
  std::string out;
  for (char c : in) {
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

}  // namespace

std::optional<SliceAxis> slice_axis_from_string(const std::string& s) {
  if (s == "x") return SliceAxis::x;
  if (s == "y") return SliceAxis::y;
  if (s == "z") return SliceAxis::z;
  return std::nullopt;
}

std::string render_slice_svg(const KDReport& report, SliceAxis axis, int slice_index,
                             const std::optional<RunManifest>& manifest) {
  const int res = report.grid.resolution;
  if (res < 2) throw ParameterError("report grid resolution below 2");
  if (slice_index < 0 || slice_index >= res) {
    throw ParameterError("slice index " + std::to_string(slice_index) + " outside [0, " +
                         std::to_string(res) + ")");
  }
  const double side = report.grid.side_length;
  const int fixed = static_cast<int>(axis);
  const int h_axis = fixed == 0 ? 1 : 0;  // horizontal plot axis
  const int v_axis = fixed == 2 ? 1 : 2;  // vertical plot axis

  // Grid-local coordinate of index n along grid axis a, in meters.
  auto coord = [&](int a, int n) {
    const double t = side * n / (res - 1);
    return a == 0 ? t : t - 0.5 * side;
  };
  auto lo = [&](int a) { return a == 0 ? 0.0 : -0.5 * side; };
  auto to_px = [&](int a, double v) { return (v - lo(a)) / side * kPlot; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n";
  if (manifest) svg << "<metadata>" << xml_escape(manifest->to_json().dump()) << "</metadata>\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"16\">" << xml_escape(report.chain_name) << ": KD " << fmt("%.4f", report.kd) << " ("
      << report.n_valid << "/" << report.n_total << ")</text>\n";
  svg << "<text x=\"" << kWidth / 2 << "\" y=\"50\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"12\">slice " << kAxisNames[fixed] << " = " << fmt("%.4f", coord(fixed, slice_index))
      << " m (index " << slice_index << ")</text>\n";

  // Frame and ticks.
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kPlot << "\" height=\"" << kPlot
      << "\" fill=\"none\" stroke=\"#444444\"/>\n";
  for (int t = 0; t <= 2; ++t) {
    const int n = t * (res - 1) / 2;
    const double hx = kLeft + to_px(h_axis, coord(h_axis, n));
    const double vy = kTop + kPlot - to_px(v_axis, coord(v_axis, n));
    svg << "<text x=\"" << fmt("%.2f", hx) << "\" y=\"" << kTop + kPlot + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt("%.3f", coord(h_axis, n)) << "</text>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << fmt("%.2f", vy + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
        << fmt("%.3f", coord(v_axis, n)) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + kPlot / 2 << "\" y=\"" << kTop + kPlot + 38
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << kAxisNames[h_axis]
      << " (m)</text>\n";
  svg << "<text x=\"22\" y=\"" << kTop + kPlot / 2 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"13\" transform=\"rotate(-90 22 " << kTop + kPlot / 2 << ")\">" << kAxisNames[v_axis]
      << " (m)</text>\n";

  const double radius = std::min(10.0, 0.35 * kPlot / (res - 1));
  for (const PointVerdict& v : report.verdicts) {
    const int idx[3] = {static_cast<int>(v.index / (static_cast<std::size_t>(res) * res)),
                        static_cast<int>((v.index / res) % res), static_cast<int>(v.index % res)};
    if (idx[fixed] != slice_index) continue;
    const double cx = kLeft + to_px(h_axis, coord(h_axis, idx[h_axis]));
    const double cy = kTop + kPlot - to_px(v_axis, coord(v_axis, idx[v_axis]));
    svg << "<circle class=\"marker " << to_string(v.status) << "\" cx=\"" << fmt("%.2f", cx) << "\" cy=\""
        << fmt("%.2f", cy) << "\" r=\"" << fmt("%.2f", radius) << "\" fill=\"" << color_for(v.status)
        << "\"/>\n";
  }

  // Legend uses square swatches so only grid points are circles.
  const std::pair<PointStatus, const char*> legend[] = {{PointStatus::valid, "valid"},
                                                        {PointStatus::near_singular, "near singular"},
                                                        {PointStatus::unreachable, "unreachable"}};
  double lx = kLeft;
  const double ly = kHeight - 30;
  for (const auto& [status, label] : legend) {
    svg << "<rect class=\"legend\" x=\"" << lx << "\" y=\"" << ly - 10 << "\" width=\"12\" height=\"12\" fill=\""
        << color_for(status) << "\"/>\n";
    svg << "<text x=\"" << lx + 18 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
    lx += 130;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace kdbench
