#pragma once

#include <opencv2/core.hpp>

#include <string>

namespace c2f {

// Axis-aligned region, 0-based pixel coordinates, (x, y) is the top-left corner.
struct BoundingBox {
  double x = 0;
  double y = 0;
  double width = 0;
  double height = 0;

  cv::Point2d center() const { return {x + width / 2.0, y + height / 2.0}; }
  double area() const { return width * height; }
  bool valid() const;

  static BoundingBox centered(cv::Point2d c, double w, double h) {
    return {c.x - w / 2.0, c.y - h / 2.0, w, h};
  }

  bool operator==(const BoundingBox&) const = default;
};

// Float intensity grid, one or three channels, values in [0,1].
struct ImagePatch {
  cv::Mat pixels;  // CV_32FC1 or CV_32FC3

  int width() const { return pixels.cols; }
  int height() const { return pixels.rows; }
  bool valid() const;
};

// A video frame held in both color and grayscale float form.
struct Frame {
  cv::Mat color;  // CV_32FC3, BGR, [0,1]
  cv::Mat gray;   // CV_32FC1, [0,1]

  cv::Size size() const { return gray.size(); }

  static Frame from_mat(const cv::Mat& image);
  static Frame load(const std::string& path);
};

ImagePatch to_gray(const ImagePatch& patch);

// Crops `box` out of `image` and resamples it bilinearly to `target_size`.
// Parts of the box outside the image replicate the nearest edge pixel.
ImagePatch extract_patch(const cv::Mat& image, const BoundingBox& box, cv::Size target_size);

}  // namespace c2f
