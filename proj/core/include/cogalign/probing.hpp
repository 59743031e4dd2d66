#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>

#include "cogalign/config.hpp"
#include "cogalign/manifest.hpp"
#include "cogalign/random.hpp"
#include "cogalign/scene.hpp"

namespace cogalign::probing {

enum class Task : uint8_t {
  angle_comparison,
  perpendicular_detection,
  length_comparison,
  chart_projection,
};

inline constexpr std::array<Task, 4> kAllTasks = {
    Task::angle_comparison,
    Task::perpendicular_detection,
    Task::length_comparison,
    Task::chart_projection,
};

std::string_view task_name(Task t);
Task parse_task(std::string_view name);

// Stream path ids. Isolation sets get their own task ids; paraphrase and
// other derived draws use split slots above 100.
uint64_t task_stream_id(Task t);
inline constexpr uint64_t kIsolationAngleStreamId = 10;
inline constexpr uint64_t kIsolationLineStreamId = 11;

inline constexpr const char* kIsolationAngleName = "isolation_angle";
inline constexpr const char* kIsolationLineName = "isolation_line";

// The fixed query wordings (see docs/queries.md).
std::string canonical_query(Task t);
inline constexpr const char* kIrrelevantQuery = "My name is John?";

std::string query_for(Task t, const std::string& query_type);

struct GeneratedInstance {
  geom::Scene scene;
  int label = 0;
  Json meta;
};

// Scene, label and ground-truth meta for one instance. The label is forced;
// exact split balance is the caller's responsibility (label = parity of the
// instance index).
GeneratedInstance generate_instance(Task task, int label, RandomStream& stream,
                                    const Margins& margins,
                                    const render::CanvasSpec& canvas);

// Spec-shaped convenience: draws the label from the stream's first coin.
GeneratedInstance generate_instance(Task task, RandomStream& stream,
                                    const Margins& margins,
                                    const render::CanvasSpec& canvas);

struct SplitCounts {
  int train = 0, dev = 0, test = 0;
  int total() const { return train + dev + test; }
  int of(Split s) const {
    switch (s) {
      case Split::train: return train;
      case Split::dev:   return dev;
      case Split::test:  return test;
    }
    return 0;
  }
};

// Exact split sizes; throws ConfigError unless n_total divides evenly into
// ratio parts with even per-split sizes (the 50/50 balance needs them even).
SplitCounts split_counts(int n_total, const std::array<int, 3>& ratio);

struct GenReport {
  std::string task;
  SplitCounts counts;
  int resampled_instances = 0;
  std::filesystem::path dir;
  std::filesystem::path manifest_path;
};

// Generate one probing dataset under <out_root>/<task>/: images in
// {train,dev,test}/NNNNNN.png plus manifest.jsonl and run.json.
GenReport generate_probing(const RunConfig& cfg, Task task,
                           const std::filesystem::path& out_root);

// The two single-object isolation sets: 10 angle classes (10..100 degrees)
// and 10 line-length classes (0.1..1.0 of canvas width), 100 images each.
std::array<GenReport, 2> generate_isolation_sets(
    const RunConfig& cfg, const std::filesystem::path& out_root);

// ---------------------------------------------------------------------------
// Verification oracle: recomputes every label from meta through geometry
// alone and reports mismatches (including margin violations).
// ---------------------------------------------------------------------------

struct VerifyReport {
  size_t agree = 0;
  struct Item {
    std::string id;
    std::string reason;
  };
  std::vector<Item> disagree;
};

VerifyReport verify_labels(const std::vector<Json>& manifest_lines,
                           const Margins& margins);

// Label recomputed from meta only; nullopt when meta sits inside an excluded
// margin band (which generation must never emit).
std::optional<int> recompute_label(const std::string& task, const Json& meta,
                                   const Margins& margins);

}  // namespace cogalign::probing
