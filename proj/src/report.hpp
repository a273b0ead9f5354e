#pragma once

#include "metrics.hpp"

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace c2f {

nlohmann::json summary_json(const EvalReport& report);

// Writes precision.csv, success.csv, summary.json, precision.svg and
// success.svg into `out_dir` (created if missing).
void emit_report(const EvalReport& report, const std::string& out_dir);

// Per-frame overlay data for one run: trajectory.txt (OTB convention) and
// diagnostics.csv.
void write_trajectory(const Trajectory& trajectory, const std::string& out_dir);

}  // namespace c2f
