#pragma once

#include "image.hpp"

#include <opencv2/core.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace c2f {

// K activation maps of identical size m x n (CV_64FC1).
struct ActivationStack {
  std::vector<cv::Mat> maps;

  int depth() const { return static_cast<int>(maps.size()); }
  cv::Size map_size() const { return maps.empty() ? cv::Size() : maps.front().size(); }
  bool valid() const;
};

// Pooled descriptor: one scalar per activation map.
struct FeatureVector {
  std::vector<double> values;
  double lambda = 0.1;

  std::size_t size() const { return values.size(); }
};

// Sums every activation map and scales the sums by `lambda`.
FeatureVector pool_features(const ActivationStack& stack, double lambda);

struct AugmentEntry {
  double rotation_deg = 0.0;
  double scale = 1.0;
  double shift_x = 0.0;  // fraction of patch width
  double shift_y = 0.0;  // fraction of patch height
};

using AugmentSpec = std::vector<AugmentEntry>;

// Four rotations, two scales, six translations.
AugmentSpec default_augment_spec();

// Returns the patch followed by one transformed copy per spec entry.
std::vector<ImagePatch> augment(const ImagePatch& patch, const AugmentSpec& spec);

class FeatureBackend {
 public:
  virtual ~FeatureBackend() = default;

  virtual std::string name() const = 0;
  // Patch size the backend expects; callers resample to it.
  virtual cv::Size input_size() const = 0;
  virtual bool wants_color() const = 0;
  virtual int depth() const = 0;
  virtual cv::Size map_size() const = 0;

  virtual ActivationStack compute(const ImagePatch& patch) const = 0;
};

// Random-projection stand-in for a CNN layer: each map is a seeded random
// linear filter applied to non-overlapping blocks of the grayscale patch,
// clamped at zero.
class SyntheticBackend final : public FeatureBackend {
 public:
  static constexpr int kDepth = 32;
  static constexpr int kMapSide = 7;
  static constexpr int kBlock = 4;

  explicit SyntheticBackend(std::uint64_t seed = 7);

  std::string name() const override { return "synthetic"; }
  cv::Size input_size() const override { return {kMapSide * kBlock, kMapSide * kBlock}; }
  bool wants_color() const override { return false; }
  int depth() const override { return kDepth; }
  cv::Size map_size() const override { return {kMapSide, kMapSide}; }

  ActivationStack compute(const ImagePatch& patch) const override;

 private:
  std::vector<cv::Mat> kernels_;  // kDepth kernels, kBlock x kBlock, CV_64F
};

// Pretrained CNN loaded from an ONNX file; reads one convolutional layer.
class DeepBackend final : public FeatureBackend {
 public:
  // `layer` empty means the network's final output.
  DeepBackend(const std::string& model_path, const std::string& layer);
  ~DeepBackend() override;

  std::string name() const override { return "deep"; }
  cv::Size input_size() const override { return {224, 224}; }
  bool wants_color() const override { return true; }
  int depth() const override { return depth_; }
  cv::Size map_size() const override { return map_size_; }

  ActivationStack compute(const ImagePatch& patch) const override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  int depth_ = 0;
  cv::Size map_size_;
};

// Resamples the patch to the backend's input size (and channel layout) and runs it.
ActivationStack compute_activations(const FeatureBackend& backend, const ImagePatch& patch);

// Crop + activations + pooling for one region of a frame.
FeatureVector describe_region(const FeatureBackend& backend, const Frame& frame, const BoundingBox& box,
                              double lambda);

struct BackendOptions {
  std::string kind = "synthetic";
  std::uint64_t seed = 7;
  std::string model_path;
  std::string layer;
};

std::shared_ptr<const FeatureBackend> make_backend(const BackendOptions& options);

}  // namespace c2f
