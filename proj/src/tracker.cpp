#include "tracker.hpp"

#include "error.hpp"

#include <algorithm>

namespace c2f {

GateDecision evaluate_gates(double quality, double mu, double gamma) {
  return {quality >= mu, quality >= gamma};
}

namespace {

void apply_updates(TrackerState& state, GateDecision gates, const CorrelationFilter* fresh,
                   const FeatureVector& predicted_features, double beta) {
  if (gates.svm) {
    state.svm.update(predicted_features);
    ++state.counters.svm_updates;
  }
  if (gates.filter) {
    state.filter = interpolate_filter(*fresh, state.filter, beta);
    ++state.counters.filter_updates;
  }
}

}  // namespace

void gated_update(TrackerState& state, const TrackerConfig& config, double quality, const CorrelationFilter& fresh,
                  const FeatureVector& predicted_features) {
  require(quality >= -1.0 && quality <= 1.0, "gated_update: quality indicator outside [-1, 1]");
  apply_updates(state, evaluate_gates(quality, config.mu, config.gamma), &fresh, predicted_features, config.beta);
}

Tracker::Tracker(TrackerConfig config, std::shared_ptr<const FeatureBackend> backend)
    : config_(std::move(config)), backend_(std::move(backend)) {
  config_.validate();
  require(backend_ != nullptr, "tracker: no feature backend");
}

const TrackerState& Tracker::state() const {
  if (!state_) fail(ErrorCode::State, "tracker: not initialized");
  return *state_;
}

FeatureVector Tracker::describe(const Frame& frame, const BoundingBox& box) const {
  return describe_region(*backend_, frame, box, config_.lambda);
}

CorrelationFilter Tracker::learn_filter(const Frame& frame, const BoundingBox& box) const {
  const BoundingBox window =
      BoundingBox::centered(box.center(), config_.search_factor * box.width, config_.search_factor * box.height);
  const ImagePatch region = extract_patch(frame.gray, window, grid_);
  const cv::Size2d target(grid_.width / config_.search_factor, grid_.height / config_.search_factor);
  return train_filter(region, target, config_.filter);
}

void Tracker::init(const Frame& frame, const BoundingBox& box) {
  require(box.valid(), "tracker init: box must have positive area");
  const cv::Point2d c = box.center();
  require(c.x >= 0 && c.y >= 0 && c.x < frame.size().width && c.y < frame.size().height,
          "tracker init: box center lies outside the frame");
  frame_size_ = frame.size();

  const cv::Mat& source = backend_->wants_color() ? frame.color : frame.gray;
  const ImagePatch target = extract_patch(source, box, backend_->input_size());
  const auto patches = augment(target, config_.augment ? default_augment_spec() : AugmentSpec{});
  std::vector<FeatureVector> vectors;
  vectors.reserve(patches.size());
  for (const auto& p : patches) vectors.push_back(pool_features(compute_activations(*backend_, p), config_.lambda));

  grid_ = filter_grid_size(box, config_.search_factor, config_.max_window_area);
  state_.emplace(TrackerState{
      .position = box,
      .svm = OneClassSvm::train(vectors, config_.nu, config_.budget),
      .filter = learn_filter(frame, box),
      .frame_index = 1,
      .last_quality = 1.0,
      .counters = {},
  });
}

double Tracker::quality_indicator(const BoundingBox& box, const Frame& frame) const {
  require(box.valid(), "quality_indicator: invalid box");
  return state().svm.score(describe(frame, box));
}

TrackResult Tracker::track(const Frame& frame) {
  if (!state_) fail(ErrorCode::State, "tracker: track() called before init()");
  require(frame.size() == frame_size_, "tracker: frame size differs from the initial frame");
  TrackerState& st = *state_;
  const BoundingBox previous = st.position;

  // Coarse: score polar candidates around the previous position.
  const CandidateGenSpec spec =
      candidate_spec_for(previous, config_.candidate_radii, config_.angle_step, config_.include_center);
  auto candidates = generate_candidates(previous.center(), previous, spec, frame_size_);
  for (auto& cand : candidates) {
    cand.feature = describe(frame, cand.box);
    cand.likelihood = st.svm.score(cand.feature);
  }
  const std::size_t best = best_candidate(candidates);

  Diagnostics diag;
  diag.candidates = candidates.size();
  diag.coarse_center = coarse_center(candidates, config_.q);
  diag.best_likelihood = *candidates[best].likelihood;

  BoundingBox predicted;
  FeatureVector predicted_features;
  if (config_.variant == Variant::NoFinePrediction) {
    predicted = candidates[best].box;
    predicted_features = candidates[best].feature;
  } else {
    const ScaleSearchResult fine =
        multi_scale_search(st.filter, frame.gray, diag.coarse_center, previous, config_.scales, config_.search_factor);
    predicted = fine.box;
    diag.peak_score = fine.peak_score;
    diag.scale_factor = fine.scale_factor;
  }

  // Keep the target inside the frame with a sane size.
  predicted.width = std::clamp(predicted.width, 4.0, double(frame_size_.width));
  predicted.height = std::clamp(predicted.height, 4.0, double(frame_size_.height));
  cv::Point2d center = predicted.center();
  center.x = std::clamp(center.x, 0.0, frame_size_.width - 1.0);
  center.y = std::clamp(center.y, 0.0, frame_size_.height - 1.0);
  predicted = BoundingBox::centered(center, predicted.width, predicted.height);
  if (config_.variant != Variant::NoFinePrediction || predicted != candidates[best].box)
    predicted_features = describe(frame, predicted);

  const double quality = st.svm.score(predicted_features);
  diag.quality = quality;

  GateDecision gates;
  switch (config_.variant) {
    case Variant::Complete: gates = evaluate_gates(quality, config_.mu, config_.gamma); break;
    case Variant::NoFinePrediction: gates = {quality >= config_.mu, false}; break;
    case Variant::NoUpdate: gates = {false, false}; break;
    case Variant::AggressiveUpdate: gates = {true, true}; break;
  }
  // The fresh filter is only needed when its gate is open.
  std::optional<CorrelationFilter> fresh;
  if (gates.filter) fresh = learn_filter(frame, predicted);
  apply_updates(st, gates, fresh ? &*fresh : nullptr, predicted_features, config_.beta);
  diag.svm_updated = gates.svm;
  diag.filter_updated = gates.filter;

  st.position = predicted;
  st.last_quality = quality;
  ++st.frame_index;
  ++st.counters.frames;
  diag.frame_index = st.frame_index;
  return {predicted, diag};
}

}  // namespace c2f
