#include "config.hpp"

#include "error.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace c2f {

using nlohmann::json;

std::string to_string(Variant v) {
  switch (v) {
    case Variant::Complete: return "complete";
    case Variant::NoFinePrediction: return "no-fine-prediction";
    case Variant::NoUpdate: return "no-update";
    case Variant::AggressiveUpdate: return "aggressive-update";
  }
  return "complete";
}

Variant parse_variant(const std::string& name) {
  for (Variant v : {Variant::Complete, Variant::NoFinePrediction, Variant::NoUpdate, Variant::AggressiveUpdate})
    if (to_string(v) == name) return v;
  fail(ErrorCode::InvalidInput, "unknown tracker variant '" + name + "'");
}

void TrackerConfig::validate() const {
  require(lambda > 0, "config: lambda must be positive");
  require(nu > 0 && nu <= 1, "config: nu must lie in (0, 1]");
  require(mu >= -1 && mu <= 1, "config: mu must lie in [-1, 1]");
  require(gamma >= -1 && gamma <= 1, "config: gamma must lie in [-1, 1]");
  require(beta >= 0 && beta <= 1, "config: beta must lie in [0, 1]");
  require(search_factor >= 1, "config: search_factor must be at least 1");
  require(budget >= 1, "config: budget must be at least 1");
  require(q >= 1, "config: q must be at least 1");
  require(angle_step > 0 && angle_step <= 360, "config: angle_step must lie in (0, 360]");
  for (std::size_t i = 0; i < candidate_radii.size(); ++i)
    require(candidate_radii[i] > 0 && (i == 0 || candidate_radii[i] > candidate_radii[i - 1]),
            "config: candidate_radii must be positive and increasing");
  require(filter.lambda > 0, "config: dcf_lambda must be positive");
  require(filter.sigma_factor > 0, "config: label_sigma_factor must be positive");
  require(filter.window_support >= 0, "config: window_support must be non-negative");
  require(max_window_area >= 64, "config: max_window_area too small");
  scales.validate();
  require(backend.kind == "synthetic" || backend.kind == "deep", "config: backend must be 'synthetic' or 'deep'");
}

json to_json(const TrackerConfig& c) {
  return json{
      {"lambda", c.lambda},
      {"nu", c.nu},
      {"mu", c.mu},
      {"gamma", c.gamma},
      {"beta", c.beta},
      {"search_factor", c.search_factor},
      {"q", c.q},
      {"budget", c.budget},
      {"candidate_radii", c.candidate_radii},
      {"angle_step", c.angle_step},
      {"include_center", c.include_center},
      {"augment", c.augment},
      {"dcf_lambda", c.filter.lambda},
      {"label_sigma_factor", c.filter.sigma_factor},
      {"filter_channels", c.filter.channels == FilterChannels::Intensity ? "intensity" : "intensity+gradients"},
      {"cosine_window", c.filter.use_window},
      {"scale_factors", c.scales.factors},
      {"scale_damping", c.scales.damping},
      {"window_support", c.filter.window_support},
      {"max_window_area", c.max_window_area},
      {"backend", c.backend.kind},
      {"synthetic_seed", c.backend.seed},
      {"model", c.backend.model_path},
      {"deep_layer", c.backend.layer},
      {"variant", to_string(c.variant)},
  };
}

TrackerConfig config_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::Format, "config: top level must be a JSON object");
  TrackerConfig c;
  const json known = to_json(c);
  for (const auto& [key, value] : j.items())
    if (!known.contains(key)) fail(ErrorCode::Format, "config: unknown key '" + key + "'");

  try {
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) field = j.at(key).get<std::decay_t<decltype(field)>>();
    };
    get("lambda", c.lambda);
    get("nu", c.nu);
    get("mu", c.mu);
    get("gamma", c.gamma);
    get("beta", c.beta);
    get("search_factor", c.search_factor);
    get("q", c.q);
    get("budget", c.budget);
    get("candidate_radii", c.candidate_radii);
    get("angle_step", c.angle_step);
    get("include_center", c.include_center);
    get("augment", c.augment);
    get("dcf_lambda", c.filter.lambda);
    get("label_sigma_factor", c.filter.sigma_factor);
    get("cosine_window", c.filter.use_window);
    get("scale_factors", c.scales.factors);
    get("scale_damping", c.scales.damping);
    get("window_support", c.filter.window_support);
    get("max_window_area", c.max_window_area);
    get("backend", c.backend.kind);
    get("synthetic_seed", c.backend.seed);
    get("model", c.backend.model_path);
    get("deep_layer", c.backend.layer);
    if (j.contains("filter_channels")) {
      const auto mode = j.at("filter_channels").get<std::string>();
      if (mode == "intensity") c.filter.channels = FilterChannels::Intensity;
      else if (mode == "intensity+gradients") c.filter.channels = FilterChannels::IntensityGradients;
      else fail(ErrorCode::Format, "config: unknown filter_channels '" + mode + "'");
    }
    if (j.contains("variant")) c.variant = parse_variant(j.at("variant").get<std::string>());
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, std::string("config: ") + e.what());
  }
  try {
    c.validate();
  } catch (const Error& e) {
    fail(ErrorCode::Format, e.what());
  }
  return c;
}

TrackerConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) return TrackerConfig{};
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::Format, "config " + path + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace c2f
