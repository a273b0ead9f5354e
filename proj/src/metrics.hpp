#pragma once

#include "image.hpp"
#include "tracker.hpp"

#include <map>
#include <string>
#include <vector>

namespace c2f {

double center_error(const BoundingBox& pred, const BoundingBox& gt);
double iou(const BoundingBox& pred, const BoundingBox& gt);

struct Trajectory {
  std::vector<BoundingBox> boxes;
  std::vector<Diagnostics> diagnostics;  // one per tracked frame (frames 2..N)
  double wall_time = 0.0;                // seconds
};

inline constexpr int kPrecisionThresholds = 51;  // 0..50 px
inline constexpr int kSuccessThresholds = 21;    // 0..1 step 0.05

double precision_threshold(int index);
double success_threshold(int index);

struct Curves {
  std::vector<double> precision;  // kPrecisionThresholds values
  std::vector<double> success;    // kSuccessThresholds values
  double precision_at_20 = 0.0;
  double auc = 0.0;
  std::size_t frames = 0;
};

// Curves from per-frame center errors and overlaps.
Curves curves_from(const std::vector<double>& errors, const std::vector<double>& overlaps);

struct SequenceResult {
  std::string name;
  std::vector<std::string> attributes;
  Curves curves;
};

struct EvalReport {
  Curves pooled;  // every frame weighted equally
  double mean_precision_at_20 = 0.0;  // averaged over sequences
  double mean_auc = 0.0;
  std::vector<SequenceResult> sequences;
  std::map<std::string, Curves> attributes;  // pooled over tagged sequences

  const std::vector<double>& precision_curve() const { return pooled.precision; }
  const std::vector<double>& success_curve() const { return pooled.success; }
  double precision_at_20() const { return pooled.precision_at_20; }
  double auc() const { return pooled.auc; }
};

struct EvaluatedRun {
  std::string name;
  std::vector<std::string> attributes;
  std::vector<BoundingBox> predicted;
  std::vector<BoundingBox> ground_truth;
};

EvalReport make_report(const std::vector<EvaluatedRun>& runs);

}  // namespace c2f
