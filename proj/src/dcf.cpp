#include "dcf.hpp"

#include "error.hpp"

#include <opencv2/imgproc.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace c2f {

namespace {

cv::Mat forward_dft(const cv::Mat& real) {
  cv::Mat spectrum;
  cv::dft(real, spectrum, cv::DFT_COMPLEX_OUTPUT);
  return spectrum;
}

cv::Mat inverse_dft_real(const cv::Mat& spectrum) {
  cv::Mat real;
  cv::dft(spectrum, real, cv::DFT_INVERSE | cv::DFT_SCALE | cv::DFT_REAL_OUTPUT);
  return real;
}

int round_even(double v) { return std::max(2, 2 * static_cast<int>(std::lround(v / 2.0))); }

ResponseMap with_peak(cv::Mat values) {
  ResponseMap map;
  map.values = std::move(values);
  map.peak_score = -std::numeric_limits<double>::infinity();
  for (int y = 0; y < map.values.rows; ++y) {
    const double* row = map.values.ptr<double>(y);
    for (int x = 0; x < map.values.cols; ++x) {
      if (row[x] > map.peak_score) {
        map.peak_score = row[x];
        map.peak = {x, y};
      }
    }
  }
  return map;
}

}  // namespace

CorrelationFilter CorrelationFilter::from_spatial(const std::vector<cv::Mat>& kernels, FilterChannels mode,
                                                  bool use_window) {
  require(!kernels.empty(), "from_spatial: no kernels");
  CorrelationFilter filter;
  filter.spatial_size = kernels.front().size();
  filter.channel_mode = mode;
  if (use_window) filter.window = cosine_window(filter.spatial_size);
  for (const auto& k : kernels) {
    require(k.size() == filter.spatial_size, "from_spatial: kernel sizes differ");
    cv::Mat k64;
    k.convertTo(k64, CV_64F);
    filter.coeffs.push_back(forward_dft(k64));
  }
  return filter;
}

std::vector<cv::Mat> CorrelationFilter::spatial() const {
  std::vector<cv::Mat> out;
  for (const auto& c : coeffs) out.push_back(inverse_dft_real(c));
  return out;
}

void ScaleSpec::validate() const {
  require(!factors.empty(), "scale spec: no factors");
  require(std::find(factors.begin(), factors.end(), 1.0) != factors.end(), "scale spec: factors must include 1.0");
  for (double f : factors) require(f > 0, "scale spec: factors must be positive");
  require(damping >= 0 && damping <= 1, "scale spec: damping must lie in [0, 1]");
}

cv::Mat gaussian_labels(cv::Size size, double sigma) {
  require(size.width > 0 && size.height > 0, "gaussian_labels: size must be positive");
  require(sigma > 0, "gaussian_labels: sigma must be positive");
  const int cx = size.width / 2, cy = size.height / 2;
  cv::Mat labels(size, CV_64F);
  for (int y = 0; y < size.height; ++y) {
    double* row = labels.ptr<double>(y);
    for (int x = 0; x < size.width; ++x) {
      const double d2 = double(x - cx) * (x - cx) + double(y - cy) * (y - cy);
      row[x] = std::exp(-d2 / (2.0 * sigma * sigma));
    }
  }
  return labels;
}

cv::Mat support_window(cv::Size size, cv::Size support) {
  require(size.width > 0 && size.height > 0, "support_window: size must be positive");
  auto axis = [](int n, int s) {
    s = std::clamp(s | 1, 1, n % 2 ? n : n - 1);
    std::vector<double> w(n, 0.0);
    const int start = n / 2 - s / 2;
    for (int i = 0; i < s; ++i)
      w[start + i] = s > 1 ? 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (i + 1) / (s + 1)) : 1.0;
    return w;
  };
  const auto wx = axis(size.width, support.width), wy = axis(size.height, support.height);
  cv::Mat window(size, CV_64F);
  for (int y = 0; y < size.height; ++y)
    for (int x = 0; x < size.width; ++x) window.at<double>(y, x) = wy[y] * wx[x];
  return window;
}

cv::Mat cosine_window(cv::Size size) {
  auto hann = [](int n) {
    std::vector<double> w(n, 1.0);
    if (n > 1)
      for (int i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / (n - 1));
    return w;
  };
  const auto wx = hann(size.width), wy = hann(size.height);
  cv::Mat window(size, CV_64F);
  for (int y = 0; y < size.height; ++y)
    for (int x = 0; x < size.width; ++x) window.at<double>(y, x) = wy[y] * wx[x];
  return window;
}

std::vector<cv::Mat> filter_channels(const ImagePatch& patch, FilterChannels mode, const cv::Mat& window,
                                     double band_sigma) {
  require(!patch.pixels.empty(), "filter_channels: empty patch");
  cv::Mat gray;
  to_gray(patch).pixels.convertTo(gray, CV_64F);

  std::vector<cv::Mat> channels;
  channels.push_back(gray - cv::mean(gray)[0]);
  if (mode == FilterChannels::IntensityGradients) {
    cv::Mat padded, gx(gray.size(), CV_64F), gy(gray.size(), CV_64F);
    cv::copyMakeBorder(gray, padded, 1, 1, 1, 1, cv::BORDER_REPLICATE);
    for (int y = 0; y < gray.rows; ++y) {
      for (int x = 0; x < gray.cols; ++x) {
        gx.at<double>(y, x) = 0.5 * (padded.at<double>(y + 1, x + 2) - padded.at<double>(y + 1, x));
        gy.at<double>(y, x) = 0.5 * (padded.at<double>(y + 2, x + 1) - padded.at<double>(y, x + 1));
      }
    }
    channels.push_back(gx);
    channels.push_back(gy);
  }
  // Unit RMS over what the window lets through, so raw peaks of windows
  // with different contrast (other scales, lighting) stay comparable. With
  // band_sigma the energy is measured after a Gaussian blur: plain RMS would
  // reward inputs that resampling has smoothed, i.e. zoomed-in windows.
  require(band_sigma >= 0, "filter_channels: band sigma must be non-negative");
  double weight = static_cast<double>(gray.total());
  if (!window.empty()) {
    require(window.size() == gray.size(), "filter_channels: window size mismatch");
    for (auto& c : channels) c = c.mul(window);
    weight = window.dot(window);
  }
  double energy = 0;
  for (const auto& c : channels) {
    if (band_sigma > 0) {
      cv::Mat smooth;
      cv::GaussianBlur(c, smooth, cv::Size(), band_sigma, band_sigma);
      energy += smooth.dot(smooth);
    } else {
      energy += c.dot(c);
    }
  }
  const double rms = weight > 0 ? std::sqrt(energy / (weight * channels.size())) : 0.0;
  if (rms > 1e-12)
    for (auto& c : channels) c /= rms;
  return channels;
}

CorrelationFilter train_filter(const std::vector<TrainingSample>& samples, cv::Size2d target_size,
                               const FilterParams& params) {
  require(!samples.empty(), "train_filter: no samples");
  require(target_size.width > 0 && target_size.height > 0, "train_filter: target size must be positive");
  require(params.lambda > 0, "train_filter: lambda must be positive");
  const cv::Size size = samples.front().region.pixels.size();
  for (const auto& sample : samples) {
    require(!sample.region.pixels.empty(), "train_filter: empty region");
    require(sample.region.pixels.size() == size, "train_filter: sample sizes differ");
    require(std::isfinite(sample.label_gain), "train_filter: label gain must be finite");
  }

  CorrelationFilter filter;
  filter.spatial_size = size;
  filter.channel_mode = params.channels;
  filter.label_sigma = params.sigma_factor * std::sqrt(target_size.width * target_size.height);
  if (params.use_window && params.window_support > 0) {
    const cv::Size support(static_cast<int>(std::lround(params.window_support * target_size.width)),
                           static_cast<int>(std::lround(params.window_support * target_size.height)));
    filter.window = support_window(size, support);
  } else if (params.use_window) {
    filter.window = cosine_window(size);
  }
  const cv::Mat label_hat = forward_dft(gaussian_labels(size, filter.label_sigma));

  // Ridge regression over all samples and channels, solved per frequency:
  // F(f_c) = sum_j conj(g_j Y) X_jc / (sum_jc |X_jc|^2 + lambda).
  const int n_channels = params.channels == FilterChannels::Intensity ? 1 : 3;
  std::vector<cv::Mat> numerators(n_channels);
  for (auto& n : numerators) n = cv::Mat(size, CV_64FC2, cv::Scalar::all(0));  // distinct buffers
  cv::Mat energy(size, CV_64F, cv::Scalar(params.lambda));
  for (const auto& sample : samples) {
    const auto channels = filter_channels(sample.region, params.channels, filter.window, filter.band_sigma());
    for (int c = 0; c < n_channels; ++c) {
      const cv::Mat x_hat = forward_dft(channels[c]);
      cv::Mat power, cross;
      cv::mulSpectrums(x_hat, x_hat, power, 0, true);
      cv::Mat planes[2];
      cv::split(power, planes);
      energy += planes[0];
      cv::mulSpectrums(x_hat, label_hat, cross, 0, true);
      numerators[c] += sample.label_gain * cross;
    }
  }

  cv::Mat energy2;
  cv::Mat energy_planes[] = {energy, energy};
  cv::merge(energy_planes, 2, energy2);
  for (const auto& numerator : numerators) {
    cv::Mat coeff;
    cv::divide(numerator, energy2, coeff);
    filter.coeffs.push_back(coeff);
  }
  return filter;
}

CorrelationFilter train_filter(const ImagePatch& region, cv::Size2d target_size, const FilterParams& params) {
  return train_filter(std::vector<TrainingSample>{{region, 1.0}}, target_size, params);
}

ResponseMap correlate(const CorrelationFilter& filter, const std::vector<cv::Mat>& channels) {
  require(static_cast<int>(channels.size()) == filter.channels(), "correlate: channel count mismatch");
  cv::Mat acc(filter.spatial_size, CV_64FC2, cv::Scalar::all(0));
  for (std::size_t c = 0; c < channels.size(); ++c) {
    require(channels[c].size() == filter.spatial_size, "correlate: region size does not match the filter");
    cv::Mat r64;
    channels[c].convertTo(r64, CV_64F);
    cv::Mat product;
    cv::mulSpectrums(forward_dft(r64), filter.coeffs[c], product, 0, true);
    acc += product;
  }
  return with_peak(inverse_dft_real(acc));
}

ResponseMap response_map(const CorrelationFilter& filter, const ImagePatch& region) {
  require(region.pixels.size() == filter.spatial_size, "response_map: region size does not match the filter");
  return correlate(filter, filter_channels(region, filter.channel_mode, filter.window, filter.band_sigma()));
}

cv::Size filter_grid_size(const BoundingBox& target, double search_factor, int max_area) {
  require(target.valid(), "filter_grid_size: invalid target box");
  double w = search_factor * target.width, h = search_factor * target.height;
  if (max_area > 0 && w * h > max_area) {
    const double k = std::sqrt(max_area / (w * h));
    w *= k;
    h *= k;
  }
  return {round_even(w), round_even(h)};
}

ScaleSearchResult multi_scale_search(const CorrelationFilter& filter, const cv::Mat& image, cv::Point2d center,
                                     const BoundingBox& current_box, const ScaleSpec& scales, double search_factor) {
  scales.validate();
  require(current_box.valid(), "multi_scale_search: invalid box");
  const cv::Size grid = filter.spatial_size;
  const cv::Point label_center(grid.width / 2, grid.height / 2);

  ScaleSearchResult best;
  best.peak_score = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < scales.factors.size(); ++s) {
    const double factor = scales.factors[s];
    const BoundingBox window = BoundingBox::centered(center, factor * search_factor * current_box.width,
                                                     factor * search_factor * current_box.height);
    ResponseMap response = response_map(filter, extract_patch(image, window, grid));
    if (response.peak_score > best.peak_score) {
      response.search_origin = {window.x, window.y};
      best.peak_score = response.peak_score;
      best.scale_index = s;
      best.scale_factor = factor;
      best.response = std::move(response);
    }
  }

  const BoundingBox window = BoundingBox::centered(center, best.scale_factor * search_factor * current_box.width,
                                                   best.scale_factor * search_factor * current_box.height);
  const double px_per_cell_x = window.width / grid.width;
  const double px_per_cell_y = window.height / grid.height;
  const cv::Point2d moved(center.x + (best.response.peak.x - label_center.x) * px_per_cell_x,
                          center.y + (best.response.peak.y - label_center.y) * px_per_cell_y);
  const double resize = 1.0 + scales.damping * (best.scale_factor - 1.0);
  best.box = BoundingBox::centered(moved, current_box.width * resize, current_box.height * resize);
  return best;
}

CorrelationFilter interpolate_filter(const CorrelationFilter& fresh, const CorrelationFilter& previous, double beta) {
  require(beta >= 0 && beta <= 1, "interpolate_filter: beta must lie in [0, 1]");
  require(fresh.spatial_size == previous.spatial_size && fresh.channels() == previous.channels(),
          "interpolate_filter: filter dimensions differ");
  if (beta == 0.0) return previous;
  if (beta == 1.0) return fresh;
  CorrelationFilter out = fresh;
  for (int c = 0; c < out.channels(); ++c) {
    cv::Mat blended = beta * fresh.coeffs[c] + (1.0 - beta) * previous.coeffs[c];
    out.coeffs[c] = blended;  // fresh buffer; `out` must not alias `fresh`
  }
  return out;
}

}  // namespace c2f
