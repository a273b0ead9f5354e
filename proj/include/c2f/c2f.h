/*
 * c2f.h - C interface to the coarse-to-fine tracking engine.
 *
 * Every object is an opaque handle created by a *_create / *_load call and
 * released by the matching *_destroy. Functions return a c2f_status; on
 * failure c2f_last_error() returns a message for the calling thread.
 *
 * Boxes are 0-based pixel rectangles (top-left corner, width, height).
 * Sequence files on disk use the OTB convention (1-based) and are converted
 * on load.
 */
#ifndef C2F_C2F_H_
#define C2F_C2F_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(C2F_BUILDING_LIBRARY)
#    define C2F_API __declspec(dllexport)
#  else
#    define C2F_API __declspec(dllimport)
#  endif
#else
#  define C2F_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum c2f_status {
  C2F_OK = 0,
  C2F_ERR_INVALID_ARGUMENT = 1,
  C2F_ERR_FORMAT = 2,
  C2F_ERR_TRACKER = 3,
  C2F_ERR_IO = 4,
  C2F_ERR_BACKEND = 5,
  C2F_ERR_OUT_OF_BOUNDS = 6,
  C2F_ERR_STATE = 7,
  C2F_ERR_INTERNAL = 8
} c2f_status;

typedef struct c2f_box {
  double x;
  double y;
  double width;
  double height;
} c2f_box;

/* 8-bit image, 1 (gray), 3 (BGR) or 4 (BGRA) interleaved channels. */
typedef struct c2f_image {
  int32_t width;
  int32_t height;
  int32_t channels;
  size_t stride; /* bytes per row; 0 means width * channels */
  const uint8_t* data;
} c2f_image;

typedef struct c2f_diagnostics {
  uint64_t frame_index;
  double coarse_x;
  double coarse_y;
  double best_likelihood;
  double quality; /* SVM score of the predicted region, in [-1, 1] */
  double peak_score;
  double scale_factor;
  int32_t svm_updated;
  int32_t filter_updated;
  uint32_t candidates;
} c2f_diagnostics;

typedef struct c2f_counters {
  uint64_t svm_updates;
  uint64_t filter_updates;
  uint64_t frames;
} c2f_counters;

typedef struct c2f_metrics {
  double precision_at_20; /* frame-pooled */
  double auc;             /* frame-pooled */
  double mean_precision_at_20; /* averaged over sequences */
  double mean_auc;
  uint64_t frames;
  uint32_t sequences;
} c2f_metrics;

typedef struct c2f_config_t* c2f_config;
typedef struct c2f_tracker_t* c2f_tracker;
typedef struct c2f_report_t* c2f_report;

C2F_API const char* c2f_version(void);
C2F_API const char* c2f_last_error(void);
C2F_API const char* c2f_status_string(c2f_status status);

/* ---- configuration ---------------------------------------------------- */

C2F_API c2f_status c2f_config_create(c2f_config* out);
/* JSON file; an empty file gives the defaults. */
C2F_API c2f_status c2f_config_load(const char* path, c2f_config* out);
C2F_API c2f_status c2f_config_parse(const char* json_text, c2f_config* out);
/* String-valued keys: "variant", "backend", "model", "deep_layer", "filter_channels". */
C2F_API c2f_status c2f_config_set_string(c2f_config config, const char* key, const char* value);
C2F_API c2f_status c2f_config_set_number(c2f_config config, const char* key, double value);
C2F_API c2f_status c2f_config_get_number(c2f_config config, const char* key, double* out);
/* Writes the JSON form into buf (NUL-terminated, truncated to capacity);
 * *needed receives the full length including the terminator. */
C2F_API c2f_status c2f_config_to_json(c2f_config config, char* buf, size_t capacity, size_t* needed);
C2F_API void c2f_config_destroy(c2f_config config);

/* ---- tracker ---------------------------------------------------------- */

/* Builds the feature backend named by the configuration. */
C2F_API c2f_status c2f_tracker_create(c2f_config config, c2f_tracker* out);
C2F_API c2f_status c2f_tracker_init(c2f_tracker tracker, const c2f_image* frame, c2f_box box);
/* out_diagnostics may be NULL. */
C2F_API c2f_status c2f_tracker_track(c2f_tracker tracker, const c2f_image* frame, c2f_box* out_box,
                                     c2f_diagnostics* out_diagnostics);
C2F_API c2f_status c2f_tracker_quality(c2f_tracker tracker, const c2f_image* frame, c2f_box box, double* out);
C2F_API c2f_status c2f_tracker_counters(c2f_tracker tracker, c2f_counters* out);
C2F_API void c2f_tracker_destroy(c2f_tracker tracker);

/* ---- benchmark -------------------------------------------------------- */

/* One-pass evaluation of one OTB-layout sequence. When out_dir is non-NULL
 * the trajectory, diagnostics and report files are written there. */
C2F_API c2f_status c2f_run_sequence(c2f_config config, const char* sequence_dir, const char* out_dir,
                                    c2f_report* out_report);
/* Every sequence below dataset_dir, `jobs` at a time. */
C2F_API c2f_status c2f_run_dataset(c2f_config config, const char* dataset_dir, int jobs, const char* out_dir,
                                   c2f_report* out_report);
C2F_API c2f_status c2f_report_metrics(c2f_report report, c2f_metrics* out);
/* Writes precision.csv, success.csv, summary.json, precision.svg, success.svg. */
C2F_API c2f_status c2f_report_emit(c2f_report report, const char* out_dir);
C2F_API void c2f_report_destroy(c2f_report report);

/* kind: "translate", "scale", "occlude" or "distractor"; speed < 0 picks
 * the kind's default. */
C2F_API c2f_status c2f_synth_write(const char* kind, int frames, uint64_t seed, double speed, const char* out_dir);

C2F_API double c2f_center_error(c2f_box predicted, c2f_box ground_truth);
C2F_API double c2f_iou(c2f_box predicted, c2f_box ground_truth);

#ifdef __cplusplus
}
#endif

#endif /* C2F_C2F_H_ */
