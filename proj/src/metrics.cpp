#include "metrics.hpp"

#include "error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace c2f {

double center_error(const BoundingBox& pred, const BoundingBox& gt) {
  const cv::Point2d a = pred.center(), b = gt.center();
  return std::hypot(a.x - b.x, a.y - b.y);
}

double iou(const BoundingBox& pred, const BoundingBox& gt) {
  const double ix = std::max(0.0, std::min(pred.x + pred.width, gt.x + gt.width) - std::max(pred.x, gt.x));
  const double iy = std::max(0.0, std::min(pred.y + pred.height, gt.y + gt.height) - std::max(pred.y, gt.y));
  const double inter = ix * iy;
  const double uni = pred.area() + gt.area() - inter;
  return uni > 0 ? std::clamp(inter / uni, 0.0, 1.0) : 0.0;
}

double precision_threshold(int index) { return static_cast<double>(index); }
double success_threshold(int index) { return index * 0.05; }

Curves curves_from(const std::vector<double>& errors, const std::vector<double>& overlaps) {
  require(errors.size() == overlaps.size(), "curves: error and overlap counts differ");
  Curves c;
  c.frames = errors.size();
  const double n = static_cast<double>(std::max<std::size_t>(c.frames, 1));
  for (int t = 0; t < kPrecisionThresholds; ++t) {
    const double tau = precision_threshold(t);
    c.precision.push_back(std::count_if(errors.begin(), errors.end(), [&](double e) { return e <= tau; }) / n);
  }
  for (int t = 0; t < kSuccessThresholds; ++t) {
    const double theta = success_threshold(t);
    c.success.push_back(std::count_if(overlaps.begin(), overlaps.end(), [&](double o) { return o > theta; }) / n);
  }
  c.precision_at_20 = c.precision[20];
  c.auc = std::accumulate(c.success.begin(), c.success.end(), 0.0) / kSuccessThresholds;
  return c;
}

EvalReport make_report(const std::vector<EvaluatedRun>& runs) {
  require(!runs.empty(), "make_report: no trajectories");
  EvalReport report;
  std::vector<double> all_err, all_iou;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_attr;

  for (const auto& run : runs) {
    require(run.predicted.size() == run.ground_truth.size(),
            "make_report: trajectory and ground truth differ in length for " + run.name);
    std::vector<double> err, ov;
    for (std::size_t i = 0; i < run.predicted.size(); ++i) {
      err.push_back(center_error(run.predicted[i], run.ground_truth[i]));
      ov.push_back(iou(run.predicted[i], run.ground_truth[i]));
    }
    all_err.insert(all_err.end(), err.begin(), err.end());
    all_iou.insert(all_iou.end(), ov.begin(), ov.end());
    for (const auto& tag : run.attributes) {
      auto& [e, o] = by_attr[tag];
      e.insert(e.end(), err.begin(), err.end());
      o.insert(o.end(), ov.begin(), ov.end());
    }
    report.sequences.push_back({run.name, run.attributes, curves_from(err, ov)});
  }

  report.pooled = curves_from(all_err, all_iou);
  for (const auto& s : report.sequences) {
    report.mean_precision_at_20 += s.curves.precision_at_20;
    report.mean_auc += s.curves.auc;
  }
  report.mean_precision_at_20 /= static_cast<double>(report.sequences.size());
  report.mean_auc /= static_cast<double>(report.sequences.size());
  for (const auto& [tag, data] : by_attr) report.attributes[tag] = curves_from(data.first, data.second);
  return report;
}

}  // namespace c2f
