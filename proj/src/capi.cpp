#include "c2f/c2f.h"

#include "config.hpp"
#include "error.hpp"
#include "metrics.hpp"
#include "ope.hpp"
#include "report.hpp"
#include "sequence.hpp"
#include "synth.hpp"
#include "tracker.hpp"

#include <nlohmann/json.hpp>

#include <cstring>
#include <filesystem>
#include <string>

struct c2f_config_t {
  c2f::TrackerConfig config;
};

struct c2f_tracker_t {
  c2f::Tracker tracker;
};

struct c2f_report_t {
  c2f::EvalReport report;
};

namespace {

thread_local std::string g_last_error;

c2f_status to_status(c2f::ErrorCode code) {
  switch (code) {
    case c2f::ErrorCode::InvalidInput: return C2F_ERR_INVALID_ARGUMENT;
    case c2f::ErrorCode::OutOfBounds: return C2F_ERR_OUT_OF_BOUNDS;
    case c2f::ErrorCode::Format: return C2F_ERR_FORMAT;
    case c2f::ErrorCode::Tracker: return C2F_ERR_TRACKER;
    case c2f::ErrorCode::Io: return C2F_ERR_IO;
    case c2f::ErrorCode::Backend: return C2F_ERR_BACKEND;
    case c2f::ErrorCode::State: return C2F_ERR_STATE;
  }
  return C2F_ERR_INTERNAL;
}

template <class F>
c2f_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return C2F_OK;
  } catch (const c2f::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return C2F_ERR_FORMAT;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return C2F_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return C2F_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (p == nullptr) c2f::fail(c2f::ErrorCode::InvalidInput, std::string(what) + " must not be NULL");
}

c2f::Frame to_frame(const c2f_image* image) {
  need(image, "image");
  need(image->data, "image data");
  c2f::require(image->width > 0 && image->height > 0, "image dimensions must be positive");
  const int type = image->channels == 1 ? CV_8UC1 : image->channels == 3 ? CV_8UC3 : image->channels == 4 ? CV_8UC4 : -1;
  c2f::require(type >= 0, "image channels must be 1, 3 or 4");
  const size_t stride = image->stride ? image->stride : static_cast<size_t>(image->width) * image->channels;
  cv::Mat view(image->height, image->width, type, const_cast<uint8_t*>(image->data), stride);
  return c2f::Frame::from_mat(view);
}

c2f::BoundingBox to_box(c2f_box b) { return {b.x, b.y, b.width, b.height}; }
c2f_box from_box(const c2f::BoundingBox& b) { return {b.x, b.y, b.width, b.height}; }

void apply_json(c2f::TrackerConfig& config, const nlohmann::json& patch) {
  nlohmann::json merged = c2f::to_json(config);
  merged.update(patch);
  config = c2f::config_from_json(merged);
}

std::shared_ptr<const c2f::FeatureBackend> backend_for(const c2f::TrackerConfig& config) {
  return c2f::make_backend(config.backend);
}

}  // namespace

extern "C" {

const char* c2f_version(void) { return "1.0.0"; }

const char* c2f_last_error(void) { return g_last_error.c_str(); }

const char* c2f_status_string(c2f_status status) {
  switch (status) {
    case C2F_OK: return "ok";
    case C2F_ERR_INVALID_ARGUMENT: return "invalid argument";
    case C2F_ERR_FORMAT: return "format error";
    case C2F_ERR_TRACKER: return "tracker error";
    case C2F_ERR_IO: return "I/O error";
    case C2F_ERR_BACKEND: return "feature backend error";
    case C2F_ERR_OUT_OF_BOUNDS: return "out of bounds";
    case C2F_ERR_STATE: return "invalid state";
    case C2F_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

// ---- configuration ---------------------------------------------------------

c2f_status c2f_config_create(c2f_config* out) {
  return guarded([&] {
    need(out, "out");
    *out = new c2f_config_t{};
  });
}

c2f_status c2f_config_load(const char* path, c2f_config* out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new c2f_config_t{c2f::load_config(path)};
  });
}

c2f_status c2f_config_parse(const char* json_text, c2f_config* out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      c2f::fail(c2f::ErrorCode::Format, std::string("config: ") + e.what());
    }
    *out = new c2f_config_t{c2f::config_from_json(j)};
  });
}

c2f_status c2f_config_set_string(c2f_config config, const char* key, const char* value) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(value, "value");
    apply_json(config->config, nlohmann::json{{key, value}});
  });
}

c2f_status c2f_config_set_number(c2f_config config, const char* key, double value) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    const nlohmann::json current = c2f::to_json(config->config);
    if (current.contains(key) && current.at(key).is_number_integer())
      apply_json(config->config, nlohmann::json{{key, static_cast<std::int64_t>(value)}});
    else if (current.contains(key) && current.at(key).is_number_unsigned())
      apply_json(config->config, nlohmann::json{{key, static_cast<std::uint64_t>(value)}});
    else
      apply_json(config->config, nlohmann::json{{key, value}});
  });
}

c2f_status c2f_config_get_number(c2f_config config, const char* key, double* out) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(out, "out");
    const nlohmann::json j = c2f::to_json(config->config);
    if (!j.contains(key) || !j.at(key).is_number())
      c2f::fail(c2f::ErrorCode::InvalidInput, std::string("no numeric config key '") + key + "'");
    *out = j.at(key).get<double>();
  });
}

c2f_status c2f_config_to_json(c2f_config config, char* buf, size_t capacity, size_t* needed) {
  return guarded([&] {
    need(config, "config");
    const std::string text = c2f::to_json(config->config).dump(2);
    if (needed) *needed = text.size() + 1;
    if (buf && capacity > 0) {
      const size_t n = std::min(capacity - 1, text.size());
      std::memcpy(buf, text.data(), n);
      buf[n] = '\0';
    }
  });
}

void c2f_config_destroy(c2f_config config) { delete config; }

// ---- tracker ---------------------------------------------------------------

c2f_status c2f_tracker_create(c2f_config config, c2f_tracker* out) {
  return guarded([&] {
    need(config, "config");
    need(out, "out");
    *out = new c2f_tracker_t{c2f::Tracker(config->config, backend_for(config->config))};
  });
}

c2f_status c2f_tracker_init(c2f_tracker tracker, const c2f_image* frame, c2f_box box) {
  return guarded([&] {
    need(tracker, "tracker");
    tracker->tracker.init(to_frame(frame), to_box(box));
  });
}

c2f_status c2f_tracker_track(c2f_tracker tracker, const c2f_image* frame, c2f_box* out_box,
                             c2f_diagnostics* out_diagnostics) {
  return guarded([&] {
    need(tracker, "tracker");
    need(out_box, "out_box");
    const c2f::TrackResult r = tracker->tracker.track(to_frame(frame));
    *out_box = from_box(r.box);
    if (out_diagnostics) {
      const auto& d = r.diagnostics;
      *out_diagnostics = c2f_diagnostics{d.frame_index,   d.coarse_center.x, d.coarse_center.y,
                                         d.best_likelihood, d.quality,       d.peak_score,
                                         d.scale_factor,  d.svm_updated,     d.filter_updated,
                                         static_cast<uint32_t>(d.candidates)};
    }
  });
}

c2f_status c2f_tracker_quality(c2f_tracker tracker, const c2f_image* frame, c2f_box box, double* out) {
  return guarded([&] {
    need(tracker, "tracker");
    need(out, "out");
    *out = tracker->tracker.quality_indicator(to_box(box), to_frame(frame));
  });
}

c2f_status c2f_tracker_counters(c2f_tracker tracker, c2f_counters* out) {
  return guarded([&] {
    need(tracker, "tracker");
    need(out, "out");
    const auto& c = tracker->tracker.state().counters;
    *out = c2f_counters{c.svm_updates, c.filter_updates, c.frames};
  });
}

void c2f_tracker_destroy(c2f_tracker tracker) { delete tracker; }

// ---- benchmark -------------------------------------------------------------

c2f_status c2f_run_sequence(c2f_config config, const char* sequence_dir, const char* out_dir,
                            c2f_report* out_report) {
  return guarded([&] {
    need(config, "config");
    need(sequence_dir, "sequence_dir");
    const c2f::Sequence seq = c2f::load_sequence(sequence_dir);
    std::vector<c2f::BenchRun> runs{{seq, c2f::run_ope(config->config, backend_for(config->config), seq)}};
    c2f::EvalReport report = c2f::report_for(runs);
    if (out_dir) {
      c2f::write_trajectory(runs.front().trajectory, out_dir);
      c2f::emit_report(report, out_dir);
    }
    if (out_report) *out_report = new c2f_report_t{std::move(report)};
  });
}

c2f_status c2f_run_dataset(c2f_config config, const char* dataset_dir, int jobs, const char* out_dir,
                           c2f_report* out_report) {
  return guarded([&] {
    need(config, "config");
    need(dataset_dir, "dataset_dir");
    std::vector<c2f::Sequence> sequences;
    for (const auto& dir : c2f::list_sequences(dataset_dir)) sequences.push_back(c2f::load_sequence(dir));
    if (sequences.empty()) c2f::fail(c2f::ErrorCode::Format, std::string("no sequences found in ") + dataset_dir);
    const auto runs = c2f::run_bench(config->config, backend_for(config->config), sequences, jobs);
    c2f::EvalReport report = c2f::report_for(runs);
    if (out_dir) {
      for (const auto& run : runs)
        c2f::write_trajectory(run.trajectory, (std::filesystem::path(out_dir) / run.sequence.name).string());
      c2f::emit_report(report, out_dir);
    }
    if (out_report) *out_report = new c2f_report_t{std::move(report)};
  });
}

c2f_status c2f_report_metrics(c2f_report report, c2f_metrics* out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    const auto& r = report->report;
    *out = c2f_metrics{r.precision_at_20(), r.auc(), r.mean_precision_at_20, r.mean_auc, r.pooled.frames,
                       static_cast<uint32_t>(r.sequences.size())};
  });
}

c2f_status c2f_report_emit(c2f_report report, const char* out_dir) {
  return guarded([&] {
    need(report, "report");
    need(out_dir, "out_dir");
    c2f::emit_report(report->report, out_dir);
  });
}

void c2f_report_destroy(c2f_report report) { delete report; }

c2f_status c2f_synth_write(const char* kind, int frames, uint64_t seed, double speed, const char* out_dir) {
  return guarded([&] {
    need(kind, "kind");
    need(out_dir, "out_dir");
    c2f::SynthSpec spec;
    spec.kind = c2f::parse_synth_kind(kind);
    spec.frames = frames;
    spec.seed = seed;
    spec.speed = speed;
    c2f::write_synthetic(c2f::generate_synthetic(spec), out_dir);
  });
}

double c2f_center_error(c2f_box predicted, c2f_box ground_truth) {
  return c2f::center_error(to_box(predicted), to_box(ground_truth));
}

double c2f_iou(c2f_box predicted, c2f_box ground_truth) { return c2f::iou(to_box(predicted), to_box(ground_truth)); }

}  // extern "C"
