#include "image.hpp"

#include "error.hpp"

#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include <cmath>

namespace c2f {

bool BoundingBox::valid() const {
  return std::isfinite(x) && std::isfinite(y) && std::isfinite(width) && std::isfinite(height) &&
         width > 0 && height > 0;
}

bool ImagePatch::valid() const {
  if (pixels.empty() || pixels.depth() != CV_32F) return false;
  if (pixels.channels() != 1 && pixels.channels() != 3) return false;
  double lo = 0, hi = 0;
  cv::minMaxLoc(pixels.reshape(1), &lo, &hi);
  return std::isfinite(lo) && std::isfinite(hi) && lo >= 0.0 && hi <= 1.0;
}

Frame Frame::from_mat(const cv::Mat& image) {
  require(!image.empty(), "empty image");
  cv::Mat f;
  const double scale = image.depth() == CV_8U ? 1.0 / 255.0 : 1.0;
  image.convertTo(f, CV_32F, scale);
  Frame frame;
  if (f.channels() == 1) {
    frame.gray = f;
    cv::cvtColor(f, frame.color, cv::COLOR_GRAY2BGR);
  } else if (f.channels() == 3) {
    frame.color = f;
    cv::cvtColor(f, frame.gray, cv::COLOR_BGR2GRAY);
  } else if (f.channels() == 4) {
    cv::cvtColor(f, frame.color, cv::COLOR_BGRA2BGR);
    cv::cvtColor(frame.color, frame.gray, cv::COLOR_BGR2GRAY);
  } else {
    fail(ErrorCode::InvalidInput, "unsupported channel count " + std::to_string(f.channels()));
  }
  return frame;
}

Frame Frame::load(const std::string& path) {
  cv::Mat raw = cv::imread(path, cv::IMREAD_COLOR);
  if (raw.empty()) fail(ErrorCode::Io, "cannot read image: " + path);
  return from_mat(raw);
}

ImagePatch to_gray(const ImagePatch& patch) {
  if (patch.pixels.channels() == 1) return patch;
  ImagePatch out;
  cv::cvtColor(patch.pixels, out.pixels, cv::COLOR_BGR2GRAY);
  return out;
}

ImagePatch extract_patch(const cv::Mat& image, const BoundingBox& box, cv::Size target_size) {
  require(!image.empty(), "extract_patch: empty image");
  require(box.valid(), "extract_patch: box must have positive finite size");
  require(target_size.width > 0 && target_size.height > 0, "extract_patch: target size must be positive");
  if (box.x >= image.cols || box.y >= image.rows || box.x + box.width <= 0 || box.y + box.height <= 0)
    fail(ErrorCode::OutOfBounds, "extract_patch: box lies entirely outside the frame");

  // Inverse map: patch pixel center (u, v) -> source position.
  const double sx = box.width / target_size.width;
  const double sy = box.height / target_size.height;
  cv::Mat m = (cv::Mat_<double>(2, 3) << sx, 0.0, box.x + 0.5 * sx - 0.5,  //
               0.0, sy, box.y + 0.5 * sy - 0.5);

  cv::Mat src = image;
  if (src.depth() != CV_32F) image.convertTo(src, CV_32F, image.depth() == CV_8U ? 1.0 / 255.0 : 1.0);
  ImagePatch patch;
  cv::warpAffine(src, patch.pixels, m, target_size, cv::INTER_LINEAR | cv::WARP_INVERSE_MAP,
                 cv::BORDER_REPLICATE);
  return patch;
}

}  // namespace c2f
