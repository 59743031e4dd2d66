#pragma once

#include <filesystem>
#include <map>

#include "cogalign/paraphrase.hpp"
#include "cogalign/probing.hpp"
#include "cogalign/scene.hpp"
#include "cogalign/templates.hpp"

namespace cogalign::pref {

// Outcome classes per task; class assignment is round-robin over the
// instance index, so per-task histograms are uniform by construction.
int outcome_class_count(Task t);
std::string_view outcome_name(Task t, int cls);

// Recompute the outcome class from meta through geometry (stats and audits
// never trust a stored class).
std::string outcome_from_meta(Task t, const Json& meta);

struct BuiltPair {
  geom::Scene scene;
  Json meta;
  int resamples = 0;
};

BuiltPair build_pref_instance(Task t, int outcome_class, RandomStream& stream,
                              const Margins& margins,
                              const render::CanvasSpec& canvas);

struct RealizedPair {
  std::string prompt;
  std::string chosen;
  std::string rejected;
};

// Pick a prompt, a true template realization, and a contradicting one.
// Negative strategy is stream-decided: 50% wrong entity binding, 50%
// opposite relation.
RealizedPair realize_templates(Task t, const Json& meta, RandomStream& stream);

// Base pair plus k rewrites (k from cfg; 0 means identity). Client failures
// fall back to rule-based rewrites when cfg.fallback is set; otherwise the
// error is surfaced per pair and the base pair is returned unexpanded.
std::vector<PreferencePair> paraphrase_expand(const PreferencePair& base,
                                              ParaphraseClient* client,
                                              const ParaphraseConfig& cfg,
                                              uint64_t master_seed,
                                              uint64_t pair_index);

struct PrefGenReport {
  int base_pairs = 0;
  int emitted_records = 0;
  int resampled_instances = 0;
  int paraphrase_failures = 0;
  std::map<std::string, int> per_task;
  std::map<std::string, std::map<std::string, int>> outcome_histogram;
  std::filesystem::path dir;
  std::filesystem::path manifest_path;
};

PrefGenReport generate_preference_dataset(const RunConfig& cfg,
                                          const std::filesystem::path& out_root,
                                          ParaphraseClient* client = nullptr);

// ---------------------------------------------------------------------------
// Verification: every chosen statement must evaluate true against meta and
// every rejected statement false. Client-paraphrased records that no longer
// match a template are counted as unverifiable rather than wrong.
// ---------------------------------------------------------------------------

struct PrefVerifyReport {
  size_t agree = 0;
  size_t skipped_unverifiable = 0;
  std::vector<probing::VerifyReport::Item> disagree;
};

PrefVerifyReport verify_pairs(const std::vector<Json>& manifest_lines);

}  // namespace cogalign::pref
