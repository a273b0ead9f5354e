#pragma once

#include "dcf.hpp"
#include "features.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>
#include <vector>

namespace c2f {

enum class Variant { Complete, NoFinePrediction, NoUpdate, AggressiveUpdate };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

struct TrackerConfig {
  // Feature pooling and one-class SVM.
  double lambda = 0.1;
  double nu = 0.1;
  double mu = 0.4;
  std::size_t budget = 50;
  std::size_t q = 5;
  std::vector<double> candidate_radii{0.25, 0.5};  // fractions of the larger target side
  double angle_step = 30.0;
  bool include_center = true;
  bool augment = true;

  // Correlation filter.
  double gamma = 0.0;
  double beta = 0.025;
  double search_factor = 4.0;
  FilterParams filter;
  ScaleSpec scales;
  int max_window_area = 256 * 256;

  BackendOptions backend;
  Variant variant = Variant::Complete;

  void validate() const;
};

nlohmann::json to_json(const TrackerConfig& config);
// Missing keys keep their defaults; unknown keys are a format error.
TrackerConfig config_from_json(const nlohmann::json& j);
// An empty file yields the defaults.
TrackerConfig load_config(const std::string& path);

}  // namespace c2f
