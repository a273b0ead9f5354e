#pragma once

#include "config.hpp"
#include "features.hpp"
#include "metrics.hpp"
#include "sequence.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace c2f {

using FrameSource = std::function<Frame(std::size_t index)>;

// One-pass evaluation: initialize on `init_box` at frame 0, then track every
// later frame once. Only the initial box is ever seen by the tracker.
Trajectory run_ope(const TrackerConfig& config, std::shared_ptr<const FeatureBackend> backend,
                   std::size_t frame_count, const FrameSource& frames, const BoundingBox& init_box);

Trajectory run_ope(const TrackerConfig& config, std::shared_ptr<const FeatureBackend> backend, const Sequence& seq);

struct BenchRun {
  Sequence sequence;
  Trajectory trajectory;
};

// Runs every sequence (up to `jobs` at a time) and reduces the results.
std::vector<BenchRun> run_bench(const TrackerConfig& config, std::shared_ptr<const FeatureBackend> backend,
                                const std::vector<Sequence>& sequences, int jobs);

EvalReport report_for(const std::vector<BenchRun>& runs);

}  // namespace c2f
