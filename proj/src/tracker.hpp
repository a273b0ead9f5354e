#pragma once

#include "coarse.hpp"
#include "config.hpp"
#include "dcf.hpp"
#include "features.hpp"
#include "svm.hpp"

#include <memory>
#include <optional>

namespace c2f {

struct UpdateCounters {
  std::size_t svm_updates = 0;
  std::size_t filter_updates = 0;
  std::size_t frames = 0;

  bool operator==(const UpdateCounters&) const = default;
};

struct TrackerState {
  BoundingBox position;
  OneClassSvm svm;
  CorrelationFilter filter;
  std::size_t frame_index = 0;
  double last_quality = 1.0;
  UpdateCounters counters;
};

struct Diagnostics {
  std::size_t frame_index = 0;
  cv::Point2d coarse_center;
  double best_likelihood = 0.0;
  double quality = 0.0;  // I_t
  double peak_score = 0.0;
  double scale_factor = 1.0;
  bool svm_updated = false;
  bool filter_updated = false;
  std::size_t candidates = 0;

  bool operator==(const Diagnostics&) const = default;
};

struct TrackResult {
  BoundingBox box;
  Diagnostics diagnostics;
};

struct GateDecision {
  bool svm = false;
  bool filter = false;
};

// I_t >= mu updates the SVM, I_t >= gamma the filter; the two gates are independent.
GateDecision evaluate_gates(double quality, double mu, double gamma);

// Applies the gated updates to `state` and bumps the counters.
void gated_update(TrackerState& state, const TrackerConfig& config, double quality, const CorrelationFilter& fresh,
                  const FeatureVector& predicted_features);

// Coarse-to-fine tracker: SVM-scored candidates give a coarse center, the
// correlation filter refines position and scale around it, and the SVM
// score of the result gates both model updates.
class Tracker {
 public:
  Tracker(TrackerConfig config, std::shared_ptr<const FeatureBackend> backend);

  void init(const Frame& frame, const BoundingBox& box);
  TrackResult track(const Frame& frame);

  // SVM score of the region `box` in `frame`.
  double quality_indicator(const BoundingBox& box, const Frame& frame) const;

  bool initialized() const { return state_.has_value(); }
  const TrackerState& state() const;
  const TrackerConfig& config() const { return config_; }
  const FeatureBackend& backend() const { return *backend_; }

 private:
  FeatureVector describe(const Frame& frame, const BoundingBox& box) const;
  CorrelationFilter learn_filter(const Frame& frame, const BoundingBox& box) const;

  TrackerConfig config_;
  std::shared_ptr<const FeatureBackend> backend_;
  std::optional<TrackerState> state_;
  cv::Size frame_size_;
  cv::Size grid_;
};

}  // namespace c2f
