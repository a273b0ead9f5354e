#include "features.hpp"

#include "error.hpp"

#include <opencv2/dnn.hpp>
#include <opencv2/imgproc.hpp>

#include <cmath>
#include <filesystem>
#include <mutex>
#include <random>

namespace c2f {

bool ActivationStack::valid() const {
  if (maps.empty()) return false;
  const cv::Size size = maps.front().size();
  if (size.area() == 0) return false;
  for (const auto& m : maps) {
    if (m.size() != size || m.type() != CV_64FC1) return false;
    if (!cv::checkRange(m)) return false;
  }
  return true;
}

FeatureVector pool_features(const ActivationStack& stack, double lambda) {
  require(!stack.maps.empty(), "pool_features: empty activation stack");
  require(stack.valid(), "pool_features: activation maps must share one size and be finite");
  require(lambda > 0, "pool_features: lambda must be positive");
  FeatureVector out;
  out.lambda = lambda;
  out.values.reserve(stack.maps.size());
  for (const auto& m : stack.maps) out.values.push_back(lambda * cv::sum(m)[0]);
  return out;
}

AugmentSpec default_augment_spec() {
  AugmentSpec spec;
  for (double deg : {-20.0, -10.0, 10.0, 20.0}) spec.push_back({deg, 1.0, 0.0, 0.0});
  for (double s : {0.95, 1.05}) spec.push_back({0.0, s, 0.0, 0.0});
  spec.push_back({0.0, 1.0, 0.1, 0.0});
  spec.push_back({0.0, 1.0, -0.1, 0.0});
  spec.push_back({0.0, 1.0, 0.0, 0.1});
  spec.push_back({0.0, 1.0, 0.0, -0.1});
  spec.push_back({0.0, 1.0, 0.1, 0.1});
  spec.push_back({0.0, 1.0, 0.1, -0.1});
  return spec;
}

std::vector<ImagePatch> augment(const ImagePatch& patch, const AugmentSpec& spec) {
  require(!patch.pixels.empty(), "augment: empty patch");
  std::vector<ImagePatch> out;
  out.reserve(spec.size() + 1);
  out.push_back(patch);
  const cv::Point2f center((patch.width() - 1) / 2.0f, (patch.height() - 1) / 2.0f);
  for (const auto& e : spec) {
    cv::Mat m = cv::getRotationMatrix2D(center, e.rotation_deg, e.scale);
    m.at<double>(0, 2) += e.shift_x * patch.width();
    m.at<double>(1, 2) += e.shift_y * patch.height();
    ImagePatch p;
    cv::warpAffine(patch.pixels, p.pixels, m, patch.pixels.size(), cv::INTER_LINEAR, cv::BORDER_REPLICATE);
    out.push_back(std::move(p));
  }
  return out;
}

SyntheticBackend::SyntheticBackend(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  kernels_.reserve(kDepth);
  for (int k = 0; k < kDepth; ++k) {
    cv::Mat kernel(kBlock, kBlock, CV_64F);
    for (int i = 0; i < kBlock; ++i)
      for (int j = 0; j < kBlock; ++j) kernel.at<double>(i, j) = gauss(rng) / kBlock;
    // Zero-mean so flat regions stay near zero and brightness alone cannot look like texture.
    kernel -= cv::mean(kernel)[0];
    kernels_.push_back(kernel);
  }
}

ActivationStack SyntheticBackend::compute(const ImagePatch& patch) const {
  require(patch.pixels.size() == input_size() && patch.pixels.channels() == 1,
          "synthetic backend: expected a 28x28 grayscale patch");
  cv::Mat gray;
  patch.pixels.convertTo(gray, CV_64F);
  ActivationStack stack;
  stack.maps.reserve(kDepth);
  for (const auto& kernel : kernels_) {
    cv::Mat map(kMapSide, kMapSide, CV_64F);
    for (int r = 0; r < kMapSide; ++r) {
      for (int c = 0; c < kMapSide; ++c) {
        double acc = 0.0;
        for (int i = 0; i < kBlock; ++i) {
          const double* row = gray.ptr<double>(r * kBlock + i) + c * kBlock;
          const double* w = kernel.ptr<double>(i);
          for (int j = 0; j < kBlock; ++j) acc += w[j] * row[j];
        }
        map.at<double>(r, c) = std::max(acc, 0.0);
      }
    }
    stack.maps.push_back(map);
  }
  return stack;
}

struct DeepBackend::Impl {
  cv::dnn::Net net;
  std::string layer;
  std::mutex mutex;  // cv::dnn::Net::forward is not reentrant
};

DeepBackend::DeepBackend(const std::string& model_path, const std::string& layer)
    : impl_(std::make_unique<Impl>()) {
  if (model_path.empty()) fail(ErrorCode::Backend, "deep backend: no model path configured");
  if (!std::filesystem::exists(model_path)) fail(ErrorCode::Backend, "deep backend: model file not found: " + model_path);
  try {
    impl_->net = cv::dnn::readNetFromONNX(model_path);
  } catch (const cv::Exception& e) {
    fail(ErrorCode::Backend, "deep backend: cannot load " + model_path + ": " + e.what());
  }
  if (impl_->net.empty()) fail(ErrorCode::Backend, "deep backend: empty network in " + model_path);
  impl_->net.setPreferableBackend(cv::dnn::DNN_BACKEND_OPENCV);
  impl_->net.setPreferableTarget(cv::dnn::DNN_TARGET_CPU);
  impl_->layer = layer;

  // Probe once to learn K, m, n.
  ImagePatch probe{cv::Mat(input_size(), CV_32FC3, cv::Scalar::all(0.5))};
  ActivationStack stack = compute(probe);
  depth_ = stack.depth();
  map_size_ = stack.map_size();
}

DeepBackend::~DeepBackend() = default;

ActivationStack DeepBackend::compute(const ImagePatch& patch) const {
  require(patch.pixels.size() == input_size() && patch.pixels.channels() == 3,
          "deep backend: expected a 224x224 color patch");
  // ImageNet normalization, RGB order.
  cv::Mat rgb;
  cv::cvtColor(patch.pixels, rgb, cv::COLOR_BGR2RGB);
  cv::subtract(rgb, cv::Scalar(0.485, 0.456, 0.406), rgb);
  cv::divide(rgb, cv::Scalar(0.229, 0.224, 0.225), rgb);
  cv::Mat blob = cv::dnn::blobFromImage(rgb);

  cv::Mat out;
  try {
    std::lock_guard lock(impl_->mutex);
    impl_->net.setInput(blob);
    out = impl_->layer.empty() ? impl_->net.forward() : impl_->net.forward(impl_->layer);
  } catch (const cv::Exception& e) {
    fail(ErrorCode::Backend, std::string("deep backend: inference failed: ") + e.what());
  }
  if (out.dims != 4 || out.size[0] != 1)
    fail(ErrorCode::Backend, "deep backend: selected layer is not a 1xKxMxN activation tensor");

  const int k = out.size[1], m = out.size[2], n = out.size[3];
  ActivationStack stack;
  stack.maps.reserve(k);
  for (int h = 0; h < k; ++h) {
    cv::Mat plane(m, n, CV_32F, out.ptr<float>(0, h));
    cv::Mat map;
    plane.convertTo(map, CV_64F);
    stack.maps.push_back(map);
  }
  if (!stack.valid()) fail(ErrorCode::Backend, "deep backend: non-finite activations");
  return stack;
}

ActivationStack compute_activations(const FeatureBackend& backend, const ImagePatch& patch) {
  require(!patch.pixels.empty(), "compute_activations: empty patch");
  ImagePatch input = patch;
  if (backend.wants_color() && input.pixels.channels() == 1) {
    cv::cvtColor(input.pixels, input.pixels, cv::COLOR_GRAY2BGR);
  } else if (!backend.wants_color() && input.pixels.channels() == 3) {
    input = to_gray(input);
  }
  if (input.pixels.size() != backend.input_size())
    cv::resize(input.pixels, input.pixels, backend.input_size(), 0, 0, cv::INTER_LINEAR);
  return backend.compute(input);
}

FeatureVector describe_region(const FeatureBackend& backend, const Frame& frame, const BoundingBox& box,
                              double lambda) {
  const cv::Mat& source = backend.wants_color() ? frame.color : frame.gray;
  ImagePatch patch = extract_patch(source, box, backend.input_size());
  return pool_features(backend.compute(patch), lambda);
}

std::shared_ptr<const FeatureBackend> make_backend(const BackendOptions& options) {
  if (options.kind == "synthetic") return std::make_shared<SyntheticBackend>(options.seed);
  if (options.kind == "deep") return std::make_shared<DeepBackend>(options.model_path, options.layer);
  fail(ErrorCode::InvalidInput, "unknown feature backend '" + options.kind + "'");
}

}  // namespace c2f
