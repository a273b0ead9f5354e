#pragma once

#include "image.hpp"

#include <opencv2/core.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace c2f {

enum class SynthKind { Translate, Scale, Occlude, Distractor };

std::string to_string(SynthKind kind);
SynthKind parse_synth_kind(const std::string& name);

// Textured square target moving over a static textured background.
struct SynthSpec {
  SynthKind kind = SynthKind::Translate;
  int frames = 100;
  std::uint64_t seed = 1;
  double speed = -1;  // px/frame; negative selects the kind's default
  cv::Size frame_size{480, 360};
  int target_side = 64;
  int occlusion_start = 40;  // 0-based frame index
  int occlusion_length = 20;
};

struct SyntheticSequence {
  std::string name;
  std::vector<cv::Mat> frames;  // CV_8UC1
  std::vector<BoundingBox> ground_truth;
  std::vector<bool> occluded;
  std::vector<std::string> attributes;
};

SyntheticSequence generate_synthetic(const SynthSpec& spec);

// Writes the sequence in OTB layout: img/0001.png..., groundtruth_rect.txt,
// attributes.txt.
void write_synthetic(const SyntheticSequence& seq, const std::string& dir);

// Smooth random texture in [lo, hi], CV_32F.
cv::Mat random_texture(cv::Size size, double blur_sigma, double lo, double hi, std::uint64_t seed);

}  // namespace c2f
