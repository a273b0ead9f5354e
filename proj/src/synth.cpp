#include "synth.hpp"

#include "error.hpp"
#include "sequence.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

namespace c2f {

namespace fs = std::filesystem;

std::string to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::Translate: return "translate";
    case SynthKind::Scale: return "scale";
    case SynthKind::Occlude: return "occlude";
    case SynthKind::Distractor: return "distractor";
  }
  return "translate";
}

SynthKind parse_synth_kind(const std::string& name) {
  for (SynthKind k : {SynthKind::Translate, SynthKind::Scale, SynthKind::Occlude, SynthKind::Distractor})
    if (to_string(k) == name) return k;
  fail(ErrorCode::InvalidInput, "unknown synthetic sequence kind '" + name + "'");
}

cv::Mat random_texture(cv::Size size, double blur_sigma, double lo, double hi, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  cv::Mat noise(size, CV_32F);
  for (int y = 0; y < size.height; ++y)
    for (int x = 0; x < size.width; ++x) noise.at<float>(y, x) = static_cast<float>(uni(rng));
  cv::Mat smooth;
  cv::GaussianBlur(noise, smooth, cv::Size(), blur_sigma, blur_sigma, cv::BORDER_REFLECT);
  cv::normalize(smooth, smooth, lo, hi, cv::NORM_MINMAX);
  return smooth;
}

namespace {

// Position along a straight path that reflects off the walls of [0, span].
double bounce(double start, double velocity, int t, double span) {
  if (span <= 0) return 0;
  double p = std::fmod(start + velocity * t, 2.0 * span);
  if (p < 0) p += 2.0 * span;
  return p <= span ? p : 2.0 * span - p;
}

// Paints `texture`, scaled to `box`, onto `canvas`.
void paint(cv::Mat& canvas, const cv::Mat& texture, const BoundingBox& box) {
  const double sx = box.width / texture.cols, sy = box.height / texture.rows;
  cv::Mat m = (cv::Mat_<double>(2, 3) << sx, 0, box.x, 0, sy, box.y);
  cv::warpAffine(texture, canvas, m, canvas.size(), cv::INTER_LINEAR, cv::BORDER_TRANSPARENT);
}

}  // namespace

SyntheticSequence generate_synthetic(const SynthSpec& spec) {
  require(spec.frames >= 2, "synth: need at least two frames");
  require(spec.target_side >= 8, "synth: target too small");
  require(spec.frame_size.width > 2 * spec.target_side && spec.frame_size.height > 2 * spec.target_side,
          "synth: frame too small for the target");

  SyntheticSequence seq;
  seq.name = to_string(spec.kind);
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);

  const cv::Mat background = random_texture(spec.frame_size, 4.0, 0.3, 0.7, rng());
  const cv::Mat target = random_texture({spec.target_side, spec.target_side}, 1.5, 0.0, 1.0, rng());
  cv::Mat distractor;
  if (spec.kind == SynthKind::Distractor) {
    distractor = random_texture({spec.target_side, spec.target_side}, 1.5, 0.1, 0.9, rng());
    seq.attributes = {"BC"};
  }
  if (spec.kind == SynthKind::Scale) seq.attributes = {"SV"};
  if (spec.kind == SynthKind::Occlude) seq.attributes = {"OCC"};

  double speed = spec.speed;
  if (speed < 0) speed = spec.kind == SynthKind::Translate ? 8.0 : spec.kind == SynthKind::Occlude ? 2.0 : 4.0;
  const double heading = 2.0 * std::numbers::pi * uni(rng);
  const double vx = speed * std::cos(heading), vy = speed * std::sin(heading);
  const double side = spec.target_side;
  // Leave room for the largest scale.
  const double max_side = spec.kind == SynthKind::Scale ? side * 1.3 : side;
  const double span_x = spec.frame_size.width - max_side, span_y = spec.frame_size.height - max_side;
  const double x0 = span_x * (0.3 + 0.4 * uni(rng)), y0 = span_y * (0.3 + 0.4 * uni(rng));
  const double dx0 = span_x * uni(rng), dy0 = span_y * uni(rng);

  for (int t = 0; t < spec.frames; ++t) {
    cv::Mat canvas = background.clone();
    double s = 1.0;
    if (spec.kind == SynthKind::Scale) s = 1.0 + 0.3 * std::sin(2.0 * std::numbers::pi * t / spec.frames);
    const double w = side * s, h = side * s;
    // Center travels; the box is placed so the scaled target stays in frame.
    const double cx = bounce(x0, vx, t, span_x) + max_side / 2.0;
    const double cy = bounce(y0, vy, t, span_y) + max_side / 2.0;
    const BoundingBox box = BoundingBox::centered({cx, cy}, w, h);

    if (spec.kind == SynthKind::Distractor) {
      const BoundingBox other{bounce(dx0, -vy, t, span_x), bounce(dy0, vx, t, span_y), side, side};
      paint(canvas, distractor, other);
    }
    const bool hidden = spec.kind == SynthKind::Occlude && t >= spec.occlusion_start &&
                        t < spec.occlusion_start + spec.occlusion_length;
    if (!hidden) paint(canvas, target, box);

    cv::Mat frame8;
    canvas.convertTo(frame8, CV_8U, 255.0);
    seq.frames.push_back(frame8);
    seq.ground_truth.push_back(box);
    seq.occluded.push_back(hidden);
  }
  return seq;
}

void write_synthetic(const SyntheticSequence& seq, const std::string& dir) {
  const fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root / "img", ec);
  if (ec) fail(ErrorCode::Io, "cannot create " + (root / "img").string() + ": " + ec.message());
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "%04zu.png", i + 1);
    const std::string path = (root / "img" / name).string();
    if (!cv::imwrite(path, seq.frames[i])) fail(ErrorCode::Io, "cannot write " + path);
  }
  write_ground_truth((root / "groundtruth_rect.txt").string(), seq.ground_truth);
  std::ofstream attrs(root / "attributes.txt");
  if (!attrs) fail(ErrorCode::Io, "cannot write attributes for " + dir);
  for (std::size_t i = 0; i < seq.attributes.size(); ++i) attrs << (i ? "," : "") << seq.attributes[i];
  attrs << "\n";
}

}  // namespace c2f
