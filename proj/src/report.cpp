#include "report.hpp"

#include "error.hpp"
#include "sequence.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

namespace c2f {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorCode::Io, "write failed: " + path.string());
}

std::string format(const char* fmt, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a);
  return buf;
}

std::string format(const char* fmt, double a, double b) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

std::string curve_csv(const std::vector<double>& values, const std::function<double(int)>& threshold,
                      const char* row_format) {
  std::string text = "threshold,value\n";
  for (int i = 0; i < static_cast<int>(values.size()); ++i) text += format(row_format, threshold(i), values[i]);
  return text;
}

std::string curve_svg(const std::string& title, const std::string& x_label, const std::vector<double>& values,
                      const std::function<double(int)>& threshold, double x_max) {
  constexpr double kW = 480, kH = 360, kLeft = 60, kRight = 20, kTop = 40, kBottom = 50;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << kW / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";
  svg << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 5; ++k) {
    const double y = kTop + ph - ph * k / 5.0;
    svg << "<line x1=\"" << kLeft << "\" y1=\"" << y << "\" x2=\"" << kLeft + pw << "\" y2=\"" << y
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << format("%.1f", k / 5.0)
        << "</text>\n";
    const double x = kLeft + pw * k / 5.0;
    svg << "<text x=\"" << x << "\" y=\"" << kTop + ph + 16
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
        << format(x_max > 1 ? "%.0f" : "%.1f", x_max * k / 5.0) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label << "</text>\n";
  svg << "<polyline fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\" points=\"";
  for (int i = 0; i < static_cast<int>(values.size()); ++i)
    svg << format("%.2f,%.2f ", kLeft + pw * threshold(i) / x_max, kTop + ph - ph * values[i]);
  svg << "\"/>\n</svg>\n";
  return svg.str();
}

json curves_json(const Curves& c) {
  return json{{"precision_at_20", c.precision_at_20}, {"auc", c.auc}, {"frames", c.frames}};
}

}  // namespace

json summary_json(const EvalReport& report) {
  json j = curves_json(report.pooled);
  j["sequence_mean"] = json{{"precision_at_20", report.mean_precision_at_20}, {"auc", report.mean_auc}};
  j["sequences"] = json::array();
  for (const auto& s : report.sequences) {
    json entry = curves_json(s.curves);
    entry["name"] = s.name;
    entry["attributes"] = s.attributes;
    j["sequences"].push_back(entry);
  }
  if (!report.attributes.empty()) {
    j["attributes"] = json::object();
    for (const auto& [tag, c] : report.attributes) j["attributes"][tag] = curves_json(c);
  }
  return j;
}

void emit_report(const EvalReport& report, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create output directory " + out_dir + ": " + ec.message());
  const fs::path dir(out_dir);

  write_file(dir / "precision.csv", curve_csv(report.precision_curve(), precision_threshold, "%.0f,%.6f\n"));
  write_file(dir / "success.csv", curve_csv(report.success_curve(), success_threshold, "%.2f,%.6f\n"));
  write_file(dir / "summary.json", summary_json(report).dump(2) + "\n");
  write_file(dir / "precision.svg", curve_svg("Precision plot (OPE)", "Location error threshold (px)",
                                              report.precision_curve(), precision_threshold, 50.0));
  write_file(dir / "success.svg", curve_svg("Success plot (OPE)", "Overlap threshold", report.success_curve(),
                                            success_threshold, 1.0));
}

void write_trajectory(const Trajectory& trajectory, const std::string& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::Io, "cannot create output directory " + out_dir + ": " + ec.message());
  const fs::path dir(out_dir);
  write_ground_truth((dir / "trajectory.txt").string(), trajectory.boxes);

  std::ostringstream csv;
  csv << "frame,coarse_x,coarse_y,best_likelihood,quality,peak_score,scale,svm_updated,filter_updated\n";
  char buf[256];
  for (const auto& d : trajectory.diagnostics) {
    std::snprintf(buf, sizeof buf, "%zu,%.3f,%.3f,%.6f,%.6f,%.6f,%.3f,%d,%d\n", d.frame_index, d.coarse_center.x,
                  d.coarse_center.y, d.best_likelihood, d.quality, d.peak_score, d.scale_factor, d.svm_updated ? 1 : 0,
                  d.filter_updated ? 1 : 0);
    csv << buf;
  }
  write_file(dir / "diagnostics.csv", csv.str());
}

}  // namespace c2f
