#include "cogalign/config.hpp"

#include <fstream>
#include <set>

#include "cogalign/error.hpp"
#include "cogalign/version.hpp"

namespace cogalign {

namespace {

void require_keys(const Json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
  if (!obj.is_object())
    throw ConfigError("config section '" + where + "' must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key))
      throw ConfigError("unknown config key '" + where + "." + key + "'");
  }
}

template <typename T>
void maybe(const Json& obj, const char* key, T& out) {
  if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

void apply_config_json(const Json& j, RunConfig& cfg) {
  require_keys(j, {"command", "generator", "version", "master_seed",
                   "output_dir", "canvas", "probing", "cogalign", "paraphrase",
                   "margins", "probe"},
               "");
  maybe(j, "master_seed", cfg.master_seed);
  maybe(j, "output_dir", cfg.output_dir);

  if (j.contains("canvas")) {
    const Json& c = j.at("canvas");
    require_keys(c, {"width", "height", "background", "stroke_width",
                     "supersample"},
                 "canvas");
    maybe(c, "width", cfg.canvas.width);
    maybe(c, "height", cfg.canvas.height);
    if (c.contains("background"))
      cfg.canvas.background = parse_color(c.at("background").get<std::string>());
    maybe(c, "stroke_width", cfg.canvas.stroke_width);
    maybe(c, "supersample", cfg.canvas.supersample);
    render::validate(cfg.canvas);
  }
  if (j.contains("probing")) {
    const Json& p = j.at("probing");
    require_keys(p, {"n_total", "ratio", "query_type", "tasks"}, "probing");
    maybe(p, "n_total", cfg.probing_n_total);
    if (p.contains("ratio")) {
      const auto r = p.at("ratio").get<std::vector<int>>();
      if (r.size() != 3 || r[0] <= 0 || r[1] <= 0 || r[2] <= 0)
        throw ConfigError("probing.ratio must be three positive integers");
      cfg.ratio = {r[0], r[1], r[2]};
    }
    maybe(p, "query_type", cfg.query_type);
    if (cfg.query_type != "original" && cfg.query_type != "empty" &&
        cfg.query_type != "irrelevant")
      throw ConfigError("probing.query_type must be original|empty|irrelevant");
    maybe(p, "tasks", cfg.probing_tasks);
  }
  if (j.contains("cogalign")) {
    const Json& c = j.at("cogalign");
    require_keys(c, {"n_total"}, "cogalign");
    maybe(c, "n_total", cfg.cogalign_n_total);
  }
  if (j.contains("paraphrase")) {
    const Json& p = j.at("paraphrase");
    require_keys(p, {"mode", "url", "k", "timeout_ms", "max_inflight",
                     "fallback"},
                 "paraphrase");
    maybe(p, "mode", cfg.paraphrase.mode);
    if (cfg.paraphrase.mode != "off" && cfg.paraphrase.mode != "client")
      throw ConfigError("paraphrase.mode must be off|client");
    maybe(p, "url", cfg.paraphrase.url);
    maybe(p, "k", cfg.paraphrase.k);
    maybe(p, "timeout_ms", cfg.paraphrase.timeout_ms);
    maybe(p, "max_inflight", cfg.paraphrase.max_inflight);
    maybe(p, "fallback", cfg.paraphrase.fallback);
  }
  if (j.contains("margins")) {
    const Json& m = j.at("margins");
    require_keys(m,
                 {"angle_deg", "length_ratio", "distance_ratio", "volume_ratio",
                  "slope_deg", "perp_neg_min_deg", "perp_neg_max_deg",
                  "chart_pos_lo", "chart_pos_hi", "chart_neg_below",
                  "chart_neg_above", "intersect_clearance", "position_axis_gap",
                  "shape_gap"},
                 "margins");
    maybe(m, "angle_deg", cfg.margins.angle_deg);
    maybe(m, "length_ratio", cfg.margins.length_ratio);
    maybe(m, "distance_ratio", cfg.margins.distance_ratio);
    maybe(m, "volume_ratio", cfg.margins.volume_ratio);
    maybe(m, "slope_deg", cfg.margins.slope_deg);
    maybe(m, "perp_neg_min_deg", cfg.margins.perp_neg_min_deg);
    maybe(m, "perp_neg_max_deg", cfg.margins.perp_neg_max_deg);
    maybe(m, "chart_pos_lo", cfg.margins.chart_pos_lo);
    maybe(m, "chart_pos_hi", cfg.margins.chart_pos_hi);
    maybe(m, "chart_neg_below", cfg.margins.chart_neg_below);
    maybe(m, "chart_neg_above", cfg.margins.chart_neg_above);
    maybe(m, "intersect_clearance", cfg.margins.intersect_clearance);
    maybe(m, "position_axis_gap", cfg.margins.position_axis_gap);
    maybe(m, "shape_gap", cfg.margins.shape_gap);
  }
  if (j.contains("probe")) {
    const Json& p = j.at("probe");
    require_keys(p, {"epochs", "lr", "batch", "seed"}, "probe");
    maybe(p, "epochs", cfg.probe.epochs);
    maybe(p, "lr", cfg.probe.lr);
    maybe(p, "batch", cfg.probe.batch);
    maybe(p, "seed", cfg.probe.seed);
  }
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw ConfigError("config parse error in " + path.string() + ": " +
                      e.what());
  }
  RunConfig cfg;
  apply_config_json(j, cfg);
  return cfg;
}

Json config_json(const RunConfig& cfg, const std::string& command) {
  Json j;
  j["command"] = command;
  j["generator"] = kGeneratorName;
  j["version"] = kVersion;
  j["master_seed"] = cfg.master_seed;
  j["output_dir"] = cfg.output_dir;
  j["canvas"] = {
      {"width", cfg.canvas.width},
      {"height", cfg.canvas.height},
      {"background", std::string(color_name(cfg.canvas.background))},
      {"stroke_width", cfg.canvas.stroke_width},
      {"supersample", cfg.canvas.supersample},
  };
  j["probing"] = {
      {"n_total", cfg.probing_n_total},
      {"ratio", cfg.ratio},
      {"query_type", cfg.query_type},
      {"tasks", cfg.probing_tasks},
  };
  j["cogalign"] = {{"n_total", cfg.cogalign_n_total}};
  j["paraphrase"] = {
      {"mode", cfg.paraphrase.mode},     {"url", cfg.paraphrase.url},
      {"k", cfg.paraphrase.k},           {"timeout_ms", cfg.paraphrase.timeout_ms},
      {"max_inflight", cfg.paraphrase.max_inflight},
      {"fallback", cfg.paraphrase.fallback},
  };
  j["margins"] = {
      {"angle_deg", cfg.margins.angle_deg},
      {"length_ratio", cfg.margins.length_ratio},
      {"distance_ratio", cfg.margins.distance_ratio},
      {"volume_ratio", cfg.margins.volume_ratio},
      {"slope_deg", cfg.margins.slope_deg},
      {"perp_neg_min_deg", cfg.margins.perp_neg_min_deg},
      {"perp_neg_max_deg", cfg.margins.perp_neg_max_deg},
      {"chart_pos_lo", cfg.margins.chart_pos_lo},
      {"chart_pos_hi", cfg.margins.chart_pos_hi},
      {"chart_neg_below", cfg.margins.chart_neg_below},
      {"chart_neg_above", cfg.margins.chart_neg_above},
      {"intersect_clearance", cfg.margins.intersect_clearance},
      {"position_axis_gap", cfg.margins.position_axis_gap},
      {"shape_gap", cfg.margins.shape_gap},
  };
  j["probe"] = {
      {"epochs", cfg.probe.epochs},
      {"lr", cfg.probe.lr},
      {"batch", cfg.probe.batch},
      {"seed", cfg.probe.seed},
  };
  return j;
}

void write_run_json(const std::filesystem::path& dir, const RunConfig& cfg,
                    const std::string& command) {
  std::ofstream out(dir / "run.json", std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write run.json in " + dir.string());
  out << config_json(cfg, command).dump(2) << '\n';
}

}  // namespace cogalign
