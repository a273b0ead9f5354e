#include "ope.hpp"

#include "error.hpp"
#include "tracker.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <thread>

namespace c2f {

Trajectory run_ope(const TrackerConfig& config, std::shared_ptr<const FeatureBackend> backend,
                   std::size_t frame_count, const FrameSource& frames, const BoundingBox& init_box) {
  require(frame_count >= 2, "run_ope: need at least two frames");
  const auto start = std::chrono::steady_clock::now();
  Tracker tracker(config, std::move(backend));
  Trajectory traj;
  traj.boxes.reserve(frame_count);

  for (std::size_t i = 0; i < frame_count; ++i) {
    Frame frame = frames(i);
    try {
      if (i == 0) {
        tracker.init(frame, init_box);
        traj.boxes.push_back(init_box);
      } else {
        TrackResult r = tracker.track(frame);
        traj.boxes.push_back(r.box);
        traj.diagnostics.push_back(r.diagnostics);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::Io || e.code() == ErrorCode::Backend) throw;
      fail(ErrorCode::Tracker, "frame " + std::to_string(i + 1) + ": " + e.what());
    } catch (const cv::Exception& e) {
      fail(ErrorCode::Tracker, "frame " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  traj.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return traj;
}

Trajectory run_ope(const TrackerConfig& config, std::shared_ptr<const FeatureBackend> backend, const Sequence& seq) {
  require(seq.frames.size() == seq.ground_truth.size() && seq.frames.size() >= 2, "run_ope: malformed sequence");
  try {
    return run_ope(config, std::move(backend), seq.frames.size(),
                   [&](std::size_t i) { return Frame::load(seq.frames[i]); }, seq.ground_truth.front());
  } catch (const Error& e) {
    fail(e.code(), "sequence " + seq.name + ": " + e.what());
  }
}

std::vector<BenchRun> run_bench(const TrackerConfig& config, std::shared_ptr<const FeatureBackend> backend,
                                const std::vector<Sequence>& sequences, int jobs) {
  require(!sequences.empty(), "run_bench: no sequences");
  std::vector<BenchRun> runs(sequences.size());
  std::vector<std::exception_ptr> errors(sequences.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    for (std::size_t i = next++; i < sequences.size(); i = next++) {
      try {
        runs[i] = {sequences[i], run_ope(config, backend, sequences[i])};
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int threads = std::clamp(jobs, 1, static_cast<int>(sequences.size()));
  std::vector<std::jthread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();

  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return runs;
}

EvalReport report_for(const std::vector<BenchRun>& runs) {
  std::vector<EvaluatedRun> evaluated;
  evaluated.reserve(runs.size());
  for (const auto& r : runs)
    evaluated.push_back({r.sequence.name, r.sequence.attributes, r.trajectory.boxes, r.sequence.ground_truth});
  return make_report(evaluated);
}

}  // namespace c2f
