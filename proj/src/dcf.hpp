#pragma once

#include "image.hpp"

#include <opencv2/core.hpp>

#include <numbers>
#include <vector>

namespace c2f {

enum class FilterChannels {
  Intensity,           // mean-removed grayscale
  IntensityGradients,  // plus horizontal and vertical central differences
};

struct FilterParams {
  double lambda = 1e-2;        // ridge term
  double sigma_factor = 0.1;   // label sigma = sigma_factor * sqrt(target w * h)
  FilterChannels channels = FilterChannels::IntensityGradients;
  bool use_window = true;      // cosine taper on every channel
  // The taper spans this multiple of the target size, zero beyond, so the
  // static surround of a large search window does not dominate the filter.
  // 0 spreads it over the whole grid.
  double window_support = 2.5;
};

// Frequency-domain filter. coeffs[c] is the DFT of the spatial filter for
// channel c (CV_64FC2, full complex spectrum of spatial_size).
struct CorrelationFilter {
  std::vector<cv::Mat> coeffs;
  cv::Size spatial_size;
  cv::Mat window;  // CV_64F taper for training and detection, empty when disabled
  double label_sigma = 0.0;
  FilterChannels channel_mode = FilterChannels::IntensityGradients;

  int channels() const { return static_cast<int>(coeffs.size()); }
  // Energy normalization band: the square root of the label's Gaussian,
  // whose sigma is label_sigma / sqrt(2). 0 (plain RMS) when untrained.
  double band_sigma() const { return label_sigma / std::numbers::sqrt2; }

  // Builds a filter from spatial kernels (one per channel).
  static CorrelationFilter from_spatial(const std::vector<cv::Mat>& kernels, FilterChannels mode, bool use_window);
  // Spatial kernels, inverse of from_spatial.
  std::vector<cv::Mat> spatial() const;
};

struct ResponseMap {
  cv::Mat values;  // CV_64F, filter.spatial_size
  cv::Point peak;
  double peak_score = 0.0;
  cv::Point2d search_origin;  // frame position of values(0,0); zero when not tied to a frame
};

struct ScaleSpec {
  std::vector<double> factors{0.95, 1.0, 1.05};
  double damping = 0.6;

  void validate() const;
};

struct ScaleSearchResult {
  BoundingBox box;
  double peak_score = 0.0;
  std::size_t scale_index = 0;
  double scale_factor = 1.0;
  ResponseMap response;  // winning scale
};

// exp(-((x-cx)^2 + (y-cy)^2) / (2 sigma^2)) with (cx, cy) = (w/2, h/2), integer division.
cv::Mat gaussian_labels(cv::Size size, double sigma);

// Separable Hann taper.
cv::Mat cosine_window(cv::Size size);

// Hann taper of `support` cells (odd, clipped to `size`) centered on
// (w/2, h/2), zero elsewhere.
cv::Mat support_window(cv::Size size, cv::Size support);

// Feature channels of a patch multiplied by `window` (none when empty) and
// scaled to unit RMS. With band_sigma > 0 the RMS is taken after a
// Gaussian blur of that sigma.
std::vector<cv::Mat> filter_channels(const ImagePatch& patch, FilterChannels mode, const cv::Mat& window,
                                     double band_sigma = 0.0);

CorrelationFilter train_filter(const ImagePatch& region, cv::Size2d target_size, const FilterParams& params);

struct TrainingSample {
  ImagePatch region;
  double label_gain = 1.0;  // amplitude of this sample's Gaussian label
};

// Joint ridge regression over several samples of one grid size, e.g. the
// target seen at several scales with the label attenuated away from 1.
CorrelationFilter train_filter(const std::vector<TrainingSample>& samples, cv::Size2d target_size,
                               const FilterParams& params);

// Correlation of the filter with already prepared (windowed) channels:
// values(t) = sum_c sum_x f_c(x) r_c(x + t), indices taken modulo the size.
ResponseMap correlate(const CorrelationFilter& filter, const std::vector<cv::Mat>& channels);

ResponseMap response_map(const CorrelationFilter& filter, const ImagePatch& region);

// Filter grid for a target: search_factor times the target, rounded to even
// sides, shrunk to fit `max_area` when larger.
cv::Size filter_grid_size(const BoundingBox& target, double search_factor, int max_area);

// Search windows of scale * search_factor * current_box around `center`,
// each resampled to the filter grid; the best peak over all scales wins.
ScaleSearchResult multi_scale_search(const CorrelationFilter& filter, const cv::Mat& image, cv::Point2d center,
                                     const BoundingBox& current_box, const ScaleSpec& scales, double search_factor);

// beta * fresh + (1 - beta) * previous, coefficient-wise.
CorrelationFilter interpolate_filter(const CorrelationFilter& fresh, const CorrelationFilter& previous, double beta);

}  // namespace c2f
