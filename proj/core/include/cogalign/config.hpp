#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cogalign/manifest.hpp"
#include "cogalign/render.hpp"

namespace cogalign {

struct ParaphraseConfig {
  std::string mode = "off";  // off | client
  std::string url;
  int k = 3;
  int timeout_ms = 10000;
  int max_inflight = 4;
  bool fallback = true;  // rule-based rewrites when the client is unreachable
};

// Generation margins. Negatives must clear these gaps so no label is ever
// decided by a quantity smaller than raster resolution.
struct Margins {
  double angle_deg = 10.0;        // min sweep gap between unequal wedges
  double length_ratio = 1.1;      // min long/short length ratio
  double distance_ratio = 1.1;    // min far/near center-distance ratio
  double volume_ratio = 1.2;      // min big/small volume ratio
  double slope_deg = 10.0;        // min orientation gap for unequal slopes
  double perp_neg_min_deg = 10.0;
  double perp_neg_max_deg = 85.0;  // the (85, 90) band is never emitted
  double chart_pos_lo = 61.0;
  double chart_pos_hi = 69.0;
  double chart_neg_below = 59.0;  // negatives in [0, below] or [above, 100]
  double chart_neg_above = 71.0;
  double intersect_clearance = 5.0;
  double position_axis_gap = 40.0;
  double shape_gap = 4.0;  // min gap between co-scene shapes
};

struct ProbeHyper {
  int epochs = 200;
  double lr = 0.1;
  int batch = 256;
  uint64_t seed = 0;
};

struct RunConfig {
  uint64_t master_seed = 7;
  std::string output_dir = "out";
  render::CanvasSpec canvas;

  int probing_n_total = 12000;
  std::array<int, 3> ratio{10, 1, 1};
  std::string query_type = "original";
  std::vector<std::string> probing_tasks;  // empty means all four

  int cogalign_n_total = 64000;
  ParaphraseConfig paraphrase;
  Margins margins;
  ProbeHyper probe;

  int jobs = 1;  // execution detail; never serialized, outputs ignore it
};

// Parse a config file. Unknown keys anywhere in the document are rejected.
RunConfig load_config_file(const std::filesystem::path& path);

// Apply a JSON config document over defaults/current values.
void apply_config_json(const Json& j, RunConfig& cfg);

// Effective config as written to run.json; `command` records the subcommand.
Json config_json(const RunConfig& cfg, const std::string& command);

// Write `<dir>/run.json`.
void write_run_json(const std::filesystem::path& dir, const RunConfig& cfg,
                    const std::string& command);

}  // namespace cogalign
