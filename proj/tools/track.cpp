// track: command-line front end over the c2f C API.
#include <c2f/c2f.h>

#include <CLI11.hpp>

#include <cstdio>
#include <string>

namespace {

// 0 ok, 2 format, 3 tracker, 4 I/O.
int exit_code(c2f_status s) {
  switch (s) {
    case C2F_OK: return 0;
    case C2F_ERR_FORMAT:
    case C2F_ERR_INVALID_ARGUMENT: return 2;
    case C2F_ERR_IO: return 4;
    default: return 3;
  }
}

struct Failure {
  c2f_status status;
};

void check(c2f_status s) {
  if (s != C2F_OK) throw Failure{s};
}

struct Config {
  c2f_config handle = nullptr;
  ~Config() { c2f_config_destroy(handle); }
};

struct Report {
  c2f_report handle = nullptr;
  ~Report() { c2f_report_destroy(handle); }
};

struct Common {
  std::string config_path;
  std::string backend;
  std::string model;
  std::string layer;
};

void load_config(Config& cfg, const Common& common) {
  if (common.config_path.empty())
    check(c2f_config_create(&cfg.handle));
  else
    check(c2f_config_load(common.config_path.c_str(), &cfg.handle));
  if (!common.backend.empty()) check(c2f_config_set_string(cfg.handle, "backend", common.backend.c_str()));
  if (!common.model.empty()) check(c2f_config_set_string(cfg.handle, "model", common.model.c_str()));
  if (!common.layer.empty()) check(c2f_config_set_string(cfg.handle, "deep_layer", common.layer.c_str()));
}

void print_metrics(const Report& report) {
  c2f_metrics m{};
  check(c2f_report_metrics(report.handle, &m));
  std::printf("sequences %u  frames %llu  precision@20 %.4f  AUC %.4f\n", m.sequences,
              static_cast<unsigned long long>(m.frames), m.precision_at_20, m.auc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse-to-fine visual object tracker"};
  app.require_subcommand(1);

  Common common;
  app.add_option("--backend", common.backend, "Feature backend")->check(CLI::IsMember({"synthetic", "deep"}));
  app.add_option("--model", common.model, "ONNX model for the deep backend");
  app.add_option("--layer", common.layer, "Output layer of the deep model (default: final output)");

  std::string seq_dir, out_dir, variant;
  auto* run = app.add_subcommand("run", "Track one OTB-layout sequence and score it");
  run->add_option("--seq", seq_dir, "Sequence directory")->required();
  run->add_option("--config", common.config_path, "JSON configuration file");
  run->add_option("--variant", variant, "complete, no-fine-prediction, no-update or aggressive-update");
  run->add_option("--out", out_dir, "Output directory")->required();

  std::string dataset;
  int jobs = 1;
  auto* bench = app.add_subcommand("bench", "Track every sequence of a dataset directory");
  bench->add_option("--dataset", dataset, "Directory of OTB-layout sequences")->required();
  bench->add_option("--config", common.config_path, "JSON configuration file");
  bench->add_option("--variant", variant, "Tracker variant");
  bench->add_option("--out", out_dir, "Output directory")->required();
  bench->add_option("--jobs", jobs, "Sequences tracked concurrently")->check(CLI::PositiveNumber);

  std::string kind = "translate";
  int frames = 100;
  std::uint64_t seed = 1;
  double speed = -1;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic OTB-layout sequence");
  synth->add_option("--kind", kind, "Motion pattern")
      ->check(CLI::IsMember({"translate", "scale", "occlude", "distractor"}));
  synth->add_option("--frames", frames, "Number of frames")->check(CLI::Range(2, 100000));
  synth->add_option("--seed", seed, "Random seed");
  synth->add_option("--speed", speed, "Target speed in px/frame (default depends on kind)");
  synth->add_option("--out", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*synth) {
      check(c2f_synth_write(kind.c_str(), frames, seed, speed, out_dir.c_str()));
      std::printf("wrote %d frames to %s\n", frames, out_dir.c_str());
      return 0;
    }
    Config cfg;
    load_config(cfg, common);
    if (!variant.empty()) check(c2f_config_set_string(cfg.handle, "variant", variant.c_str()));
    Report report;
    if (*run)
      check(c2f_run_sequence(cfg.handle, seq_dir.c_str(), out_dir.c_str(), &report.handle));
    else
      check(c2f_run_dataset(cfg.handle, dataset.c_str(), jobs, out_dir.c_str(), &report.handle));
    print_metrics(report);
    return 0;
  } catch (const Failure& f) {
    std::fprintf(stderr, "track: %s: %s\n", c2f_status_string(f.status), c2f_last_error());
    return exit_code(f.status);
  }
}
