#include "cogalign/probing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>

#include "cogalign/error.hpp"
#include "cogalign/log.hpp"
#include "cogalign/parallel.hpp"
#include "cogalign/png_io.hpp"
#include "cogalign/render.hpp"

namespace cogalign::probing {

namespace fs = std::filesystem;
using geom::ChartScene;
using geom::LineSegment;
using geom::Point2;
using geom::Scene;
using geom::Wedge;

namespace {

constexpr double kExactRelTol = 1e-9;
constexpr double kPerpTolDeg = 1e-6;
constexpr int kPlacementTries = 100;

bool nearly_equal(double a, double b, double tol = kExactRelTol) {
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

Json point_json(Point2 p) { return Json::array({p.x, p.y}); }

Point2 point_from_json(const Json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json segment_json(const LineSegment& s) {
  Json j;
  j["p0"] = point_json(s.p0);
  j["p1"] = point_json(s.p1);
  j["color"] = std::string(color_name(s.color));
  return j;
}

LineSegment segment_from_json(const Json& j) {
  LineSegment s;
  s.p0 = point_from_json(j.at("p0"));
  s.p1 = point_from_json(j.at("p1"));
  s.color = parse_color(j.at("color").get<std::string>());
  return s;
}

Json wedge_json(const Wedge& w) {
  Json j;
  j["vertex"] = point_json(w.vertex);
  j["start_deg"] = w.start_deg;
  j["sweep_deg"] = w.sweep_deg;
  j["radius"] = w.radius;
  j["color"] = std::string(color_name(w.color));
  return j;
}

std::pair<ColorName, ColorName> two_colors(RandomStream& s) {
  const int a = static_cast<int>(s.uniform_int(0, kObjectColors.size() - 1));
  const int b = (a + 1 + static_cast<int>(s.uniform_int(
                             0, kObjectColors.size() - 2))) %
                static_cast<int>(kObjectColors.size());
  return {kObjectColors[static_cast<size_t>(a)],
          kObjectColors[static_cast<size_t>(b)]};
}

// ---------------------------------------------------------------------------
// Per-task scene builders
// ---------------------------------------------------------------------------

struct BuildResult {
  Scene scene;
  Json meta;
  int resamples = 0;
};

BuildResult build_angle(int label, RandomStream& s, const Margins& m,
                        const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  double sweep_a, sweep_b;
  if (label == 1) {
    sweep_a = s.uniform(15.0, 160.0);
    sweep_b = sweep_a;
  } else {
    do {
      sweep_a = s.uniform(15.0, 160.0);
      sweep_b = s.uniform(15.0, 160.0);
    } while (std::fabs(sweep_a - sweep_b) < m.angle_deg);
  }
  const auto [ca, cb] = two_colors(s);
  auto make_wedge = [&](double sweep, ColorName color, double x_lo,
                        double x_hi) {
    Wedge wd;
    wd.radius = s.uniform(0.13 * mm, 0.20 * mm);
    wd.vertex.x = s.uniform(x_lo + wd.radius + 8, x_hi - wd.radius - 8);
    wd.vertex.y = s.uniform(wd.radius + 8, h - wd.radius - 8);
    wd.start_deg = s.uniform(0.0, 360.0);
    wd.sweep_deg = sweep;
    wd.color = color;
    return wd;
  };
  const Wedge wa = make_wedge(sweep_a, ca, 0.0, w / 2);
  const Wedge wb = make_wedge(sweep_b, cb, w / 2, w);

  BuildResult out;
  out.scene.elements = {wa, wb};
  out.meta["wedges"] = Json::array({wedge_json(wa), wedge_json(wb)});
  out.meta["sweep_delta_deg"] = std::fabs(sweep_a - sweep_b);
  return out;
}

BuildResult build_perpendicular(int label, RandomStream& s, const Margins& m,
                                const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  const double half_a = s.uniform(0.14 * mm, 0.28 * mm);
  const double half_b = s.uniform(0.14 * mm, 0.28 * mm);
  const double reach = std::max(half_a, half_b) + 6;
  const Point2 cross{s.uniform(reach, w - reach), s.uniform(reach, h - reach)};
  const double theta_a = s.uniform(0.0, 180.0);
  double theta_b;
  if (label == 1) {
    theta_b = theta_a + 90.0;
  } else {
    const double delta = s.uniform(m.perp_neg_min_deg, m.perp_neg_max_deg);
    theta_b = theta_a + (s.bernoulli(0.5) ? delta : -delta);
  }
  const auto [ca, cb] = two_colors(s);
  const Point2 da = geom::unit_dir(theta_a);
  const Point2 db = geom::unit_dir(theta_b);
  const LineSegment sa{cross - da * half_a, cross + da * half_a, ca, {}};
  const LineSegment sb{cross - db * half_b, cross + db * half_b, cb, {}};

  BuildResult out;
  out.scene.elements = {sa, sb};
  out.meta["segments"] = Json::array({segment_json(sa), segment_json(sb)});
  out.meta["angle_deg"] = geom::measure_angle_between(sa, sb);
  return out;
}

BuildResult build_length(int label, RandomStream& s, const Margins& m,
                         const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  BuildResult out;
  for (;;) {
    double len_a = s.uniform(0.16 * mm, 0.50 * mm);
    double len_b;
    if (label == 1) {
      len_b = len_a;
    } else {
      const double ratio = s.uniform(m.length_ratio, 1.7);
      len_b = s.bernoulli(0.5) ? len_a * ratio : len_a / ratio;
      if (len_b < 0.10 * mm || len_b > 0.55 * mm) continue;
    }
    const double theta_a = s.uniform(0.0, 180.0);
    const double theta_b = s.uniform(0.0, 180.0);
    const auto [ca, cb] = two_colors(s);

    auto sample_segment = [&](double len, double theta, ColorName color) {
      const Point2 d = geom::unit_dir(theta);
      const double ex = std::fabs(d.x) * len / 2 + 6;
      const double ey = std::fabs(d.y) * len / 2 + 6;
      const Point2 mid{s.uniform(ex, w - ex), s.uniform(ey, h - ey)};
      return LineSegment{mid - d * (len / 2), mid + d * (len / 2), color, {}};
    };

    bool placed = false;
    LineSegment sa, sb;
    for (int tries = 0; tries < kPlacementTries; ++tries) {
      sa = sample_segment(len_a, theta_a, ca);
      sb = sample_segment(len_b, theta_b, cb);
      if (geom::segment_segment_distance(sa.p0, sa.p1, sb.p0, sb.p1) >= 12.0) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      ++out.resamples;
      continue;
    }
    out.scene.elements = {sa, sb};
    out.meta["segments"] = Json::array({segment_json(sa), segment_json(sb)});
    const double la = geom::measure_length(sa);
    const double lb = geom::measure_length(sb);
    out.meta["length_ratio"] = std::max(la, lb) / std::min(la, lb);
    return out;
  }
}

BuildResult build_chart(int label, RandomStream& s, const Margins& m,
                        const render::CanvasSpec& canvas) {
  (void)canvas;
  BuildResult out;
  for (;;) {
    const int n = static_cast<int>(s.uniform_int(4, 8));
    std::vector<double> xs;
    for (int tries = 0;; ++tries) {
      xs.assign(1, 0.0);
      for (int i = 0; i < n - 2; ++i) xs.push_back(s.uniform(6.0, 94.0));
      xs.push_back(100.0);
      std::sort(xs.begin(), xs.end());
      bool ok = true;
      for (size_t i = 1; i < xs.size(); ++i) {
        if (xs[i] - xs[i - 1] < 4.0) ok = false;
      }
      if (ok) break;
      if (tries >= kPlacementTries) {  // even spacing fallback
        xs.clear();
        for (int i = 0; i < n; ++i) xs.push_back(100.0 * i / (n - 1));
        break;
      }
    }
    double target;
    if (label == 1) {
      target = s.uniform(m.chart_pos_lo, m.chart_pos_hi);
    } else {
      const double u = s.uniform(0.0, m.chart_neg_below + (100.0 - m.chart_neg_above));
      target = u <= m.chart_neg_below ? u : u + (m.chart_neg_above - m.chart_neg_below);
    }
    const int j = static_cast<int>(s.uniform_int(0, n - 2));
    const double t = s.uniform(0.3, 0.7);
    double y_left = target, y_right = target;
    for (int tries = 0; tries < 30; ++tries) {
      const double yl = s.uniform(0.0, 100.0);
      const double yr = yl + (target - yl) / t;
      if (yr >= 0.0 && yr <= 100.0) {
        y_left = yl;
        y_right = yr;
        break;
      }
    }
    std::vector<double> ys(static_cast<size_t>(n));
    for (auto& y : ys) y = s.uniform(2.0, 98.0);
    ys[static_cast<size_t>(j)] = y_left;
    ys[static_cast<size_t>(j) + 1] = y_right;

    ChartScene chart;
    chart.xs = xs;
    chart.ys = ys;
    chart.dot_x = xs[static_cast<size_t>(j)] +
                  t * (xs[static_cast<size_t>(j) + 1] - xs[static_cast<size_t>(j)]);
    chart.dot_y = geom::chart_interpolate(chart, chart.dot_x);

    // Guard the float edge: the interpolated value must land in its band.
    const bool in_pos = chart.dot_y >= m.chart_pos_lo && chart.dot_y <= m.chart_pos_hi;
    const bool in_neg = (chart.dot_y >= 0.0 && chart.dot_y <= m.chart_neg_below) ||
                        (chart.dot_y >= m.chart_neg_above && chart.dot_y <= 100.0);
    if ((label == 1 && !in_pos) || (label == 0 && !in_neg)) {
      ++out.resamples;
      continue;
    }
    out.scene.elements = {chart};
    out.meta["xs"] = chart.xs;
    out.meta["ys"] = chart.ys;
    out.meta["dot_x"] = chart.dot_x;
    out.meta["dot_y"] = chart.dot_y;
    return out;
  }
}

BuildResult build_isolation_angle(int class_index, RandomStream& s,
                                  const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  Wedge wd;
  wd.sweep_deg = 10.0 * (class_index + 1);
  wd.radius = s.uniform(0.16 * mm, 0.22 * mm);
  wd.vertex.x = s.uniform(wd.radius + 8, w - wd.radius - 8);
  wd.vertex.y = s.uniform(wd.radius + 8, h - wd.radius - 8);
  wd.start_deg = s.uniform(0.0, 360.0);
  wd.color = ColorName::black;

  BuildResult out;
  out.scene.elements = {wd};
  out.meta["class_deg"] = wd.sweep_deg;
  out.meta["wedge"] = wedge_json(wd);
  return out;
}

BuildResult build_isolation_line(int class_index, RandomStream& s,
                                 const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double fraction = (class_index + 1) / 10.0;
  const double length = fraction * w;
  const double y = s.uniform(6.0, h - 6.0);
  const double x0 = length >= w ? 0.0 : s.uniform(0.0, w - length);
  const LineSegment seg{{x0, y}, {x0 + length, y}, ColorName::black, {}};

  BuildResult out;
  out.scene.elements = {seg};
  out.meta["class_fraction"] = fraction;
  out.meta["length_px"] = length;
  out.meta["canvas_width"] = w;
  out.meta["segment"] = segment_json(seg);
  return out;
}

BuildResult build_instance(Task task, int label, RandomStream& s,
                           const Margins& m, const render::CanvasSpec& canvas) {
  if (std::min(canvas.width, canvas.height) < 192)
    throw ConfigError("dataset generation requires a canvas of at least 192");
  switch (task) {
    case Task::angle_comparison:       return build_angle(label, s, m, canvas);
    case Task::perpendicular_detection:
      return build_perpendicular(label, s, m, canvas);
    case Task::length_comparison:      return build_length(label, s, m, canvas);
    case Task::chart_projection:       return build_chart(label, s, m, canvas);
  }
  throw DomainError("unknown probing task");
}

std::string pad6(int v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", v);
  return buf;
}

}  // namespace

std::string_view task_name(Task t) {
  switch (t) {
    case Task::angle_comparison:        return "angle_comparison";
    case Task::perpendicular_detection: return "perpendicular_detection";
    case Task::length_comparison:       return "length_comparison";
    case Task::chart_projection:        return "chart_projection";
  }
  return "angle_comparison";
}

Task parse_task(std::string_view name) {
  for (Task t : kAllTasks) {
    if (task_name(t) == name) return t;
  }
  throw ConfigError("unknown probing task: " + std::string(name));
}

uint64_t task_stream_id(Task t) { return static_cast<uint64_t>(t) + 1; }

std::string canonical_query(Task t) {
  switch (t) {
    case Task::angle_comparison:
      return "Do the two wedges in the image have the same angle?";
    case Task::perpendicular_detection:
      return "Are the two lines in the image perpendicular to each other?";
    case Task::length_comparison:
      return "Are the two lines in the image of the same length?";
    case Task::chart_projection:
      return "Does the value of the red dot on the line chart lie between 60 "
             "and 70?";
  }
  return "";
}

std::string query_for(Task t, const std::string& query_type) {
  if (query_type == "original") return canonical_query(t);
  if (query_type == "empty") return "";
  if (query_type == "irrelevant") return kIrrelevantQuery;
  throw ConfigError("unknown query_type: " + query_type);
}

GeneratedInstance generate_instance(Task task, int label, RandomStream& stream,
                                    const Margins& margins,
                                    const render::CanvasSpec& canvas) {
  BuildResult b = build_instance(task, label, stream, margins, canvas);
  return {std::move(b.scene), label, std::move(b.meta)};
}

GeneratedInstance generate_instance(Task task, RandomStream& stream,
                                    const Margins& margins,
                                    const render::CanvasSpec& canvas) {
  const int label = stream.bernoulli(0.5) ? 1 : 0;
  return generate_instance(task, label, stream, margins, canvas);
}

SplitCounts split_counts(int n_total, const std::array<int, 3>& ratio) {
  const int sum = ratio[0] + ratio[1] + ratio[2];
  if (sum <= 0) throw ConfigError("split ratio must be positive");
  if (n_total <= 0 || n_total % (sum * 2) != 0)
    throw ConfigError("n_total must be a positive multiple of " +
                      std::to_string(sum * 2) +
                      " (ratio sum x 2, for exact balanced splits)");
  const int unit = n_total / sum;
  return {ratio[0] * unit, ratio[1] * unit, ratio[2] * unit};
}

GenReport generate_probing(const RunConfig& cfg, Task task,
                           const fs::path& out_root) {
  const SplitCounts counts = split_counts(cfg.probing_n_total, cfg.ratio);
  const fs::path dir = out_root / std::string(task_name(task));
  std::error_code ec;
  for (Split sp : {Split::train, Split::dev, Split::test}) {
    fs::create_directories(dir / std::string(split_name(sp)), ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  }

  struct Work {
    Split split;
    int index;
  };
  std::vector<Work> work;
  work.reserve(static_cast<size_t>(counts.total()));
  for (Split sp : {Split::train, Split::dev, Split::test}) {
    for (int i = 0; i < counts.of(sp); ++i) work.push_back({sp, i});
  }

  std::vector<Json> lines(work.size());
  std::atomic<int> resamples{0};
  const std::string query = query_for(task, cfg.query_type);

  parallel_for(work.size(), cfg.jobs, [&](size_t slot) {
    const Work& wk = work[slot];
    RandomStream stream = derive_stream(
        cfg.master_seed, {task_stream_id(task),
                          static_cast<uint64_t>(wk.split),
                          static_cast<uint64_t>(wk.index)});
    const int label = wk.index % 2 == 0 ? 1 : 0;
    BuildResult b =
        build_instance(task, label, stream, cfg.margins, cfg.canvas);
    if (b.resamples > 0) resamples += b.resamples;

    const std::string file = pad6(wk.index) + ".png";
    const std::string rel =
        std::string(split_name(wk.split)) + "/" + file;
    const std::vector<uint8_t> png = render::render_png(b.scene, cfg.canvas);
    render::write_binary_file(dir / std::string(split_name(wk.split)) / file,
                              png);

    ProbeInstance inst;
    inst.id = std::string(task_name(task)) + "-" +
              std::string(split_name(wk.split)) + "-" + pad6(wk.index);
    inst.task = std::string(task_name(task));
    inst.split = wk.split;
    inst.image = rel;
    inst.query = query;
    inst.query_type = cfg.query_type;
    inst.label = label;
    inst.meta = std::move(b.meta);
    lines[slot] = to_json(inst);
  });

  write_jsonl(dir / "manifest.jsonl", lines);
  RunConfig run_cfg = cfg;
  run_cfg.probing_tasks = {std::string(task_name(task))};
  write_run_json(dir, run_cfg, "gen probing");

  GenReport report;
  report.task = task_name(task);
  report.counts = counts;
  report.resampled_instances = resamples.load();
  report.dir = dir;
  report.manifest_path = dir / "manifest.jsonl";
  log_info("gen.probing.done",
           {{"task", report.task},
            {"train", counts.train},
            {"dev", counts.dev},
            {"test", counts.test},
            {"resampled", report.resampled_instances}});
  return report;
}

std::array<GenReport, 2> generate_isolation_sets(const RunConfig& cfg,
                                                 const fs::path& out_root) {
  constexpr int kClasses = 10;
  constexpr int kPerClass = 100;

  auto run = [&](const char* name, uint64_t stream_id, bool angle) {
    const fs::path dir = out_root / name;
    std::error_code ec;
    fs::create_directories(dir / "test", ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    std::vector<Json> lines(kClasses * kPerClass);
    parallel_for(lines.size(), cfg.jobs, [&](size_t slot) {
      const int index = static_cast<int>(slot);
      const int class_index = index / kPerClass;
      RandomStream stream = derive_stream(
          cfg.master_seed, {stream_id, 0, static_cast<uint64_t>(index)});
      BuildResult b = angle
                          ? build_isolation_angle(class_index, stream, cfg.canvas)
                          : build_isolation_line(class_index, stream, cfg.canvas);
      const std::string file = pad6(index) + ".png";
      render::write_binary_file(dir / "test" / file,
                                render::render_png(b.scene, cfg.canvas));
      ProbeInstance inst;
      inst.id = std::string(name) + "-test-" + pad6(index);
      inst.task = name;
      inst.split = Split::test;
      inst.image = "test/" + file;
      inst.query = "";
      inst.query_type = "empty";
      inst.label = 0;
      inst.meta = std::move(b.meta);
      lines[slot] = to_json(inst);
    });
    write_jsonl(dir / "manifest.jsonl", lines);
    write_run_json(dir, cfg, "gen isolation");

    GenReport report;
    report.task = name;
    report.counts = {0, 0, kClasses * kPerClass};
    report.dir = dir;
    report.manifest_path = dir / "manifest.jsonl";
    log_info("gen.isolation.done", {{"set", name}, {"count", kClasses * kPerClass}});
    return report;
  };

  return {run(kIsolationAngleName, kIsolationAngleStreamId, true),
          run(kIsolationLineName, kIsolationLineStreamId, false)};
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

std::optional<int> recompute_label(const std::string& task, const Json& meta,
                                   const Margins& m) {
  if (task == "angle_comparison") {
    const double a = meta.at("wedges").at(0).at("sweep_deg").get<double>();
    const double b = meta.at("wedges").at(1).at("sweep_deg").get<double>();
    if (!std::isfinite(a) || !std::isfinite(b)) return std::nullopt;
    const double delta = std::fabs(a - b);
    if (delta <= kExactRelTol * std::max(1.0, std::max(a, b))) return 1;
    if (delta >= m.angle_deg - 1e-9) return 0;
    return std::nullopt;
  }
  if (task == "perpendicular_detection") {
    const LineSegment sa = segment_from_json(meta.at("segments").at(0));
    const LineSegment sb = segment_from_json(meta.at("segments").at(1));
    const double angle = geom::measure_angle_between(sa, sb);
    if (std::fabs(angle - 90.0) <= kPerpTolDeg) return 1;
    if (angle <= m.perp_neg_max_deg + 1e-9) return 0;
    return std::nullopt;
  }
  if (task == "length_comparison") {
    const LineSegment sa = segment_from_json(meta.at("segments").at(0));
    const LineSegment sb = segment_from_json(meta.at("segments").at(1));
    const double la = geom::measure_length(sa);
    const double lb = geom::measure_length(sb);
    if (la <= 0 || lb <= 0) return std::nullopt;
    const double ratio = std::max(la, lb) / std::min(la, lb);
    if (ratio <= 1.0 + kExactRelTol) return 1;
    if (ratio >= m.length_ratio - 1e-9) return 0;
    return std::nullopt;
  }
  if (task == "chart_projection") {
    const auto xs = meta.at("xs").get<std::vector<double>>();
    const auto ys = meta.at("ys").get<std::vector<double>>();
    const double dot_x = meta.at("dot_x").get<double>();
    const double dot_y = meta.at("dot_y").get<double>();
    const double recomputed = geom::polyline_interpolate(xs, ys, dot_x);
    if (!nearly_equal(recomputed, dot_y, 1e-9)) return std::nullopt;
    if (dot_y >= m.chart_pos_lo && dot_y <= m.chart_pos_hi) return 1;
    if ((dot_y >= 0.0 && dot_y <= m.chart_neg_below) ||
        (dot_y >= m.chart_neg_above && dot_y <= 100.0))
      return 0;
    return std::nullopt;
  }
  if (task == kIsolationAngleName) {
    const double class_deg = meta.at("class_deg").get<double>();
    const double sweep = meta.at("wedge").at("sweep_deg").get<double>();
    const double k = class_deg / 10.0;
    const bool on_grid = class_deg >= 10.0 && class_deg <= 100.0 &&
                         std::fabs(k - std::round(k)) <= 1e-12;
    if (!on_grid || !nearly_equal(sweep, class_deg)) return std::nullopt;
    return 0;
  }
  if (task == kIsolationLineName) {
    const double fraction = meta.at("class_fraction").get<double>();
    const double length_px = meta.at("length_px").get<double>();
    const double canvas_w = meta.at("canvas_width").get<double>();
    const LineSegment seg = segment_from_json(meta.at("segment"));
    const double k = fraction * 10.0;
    const bool on_grid = fraction >= 0.1 && fraction <= 1.0 &&
                         std::fabs(k - std::round(k)) <= 1e-12;
    if (!on_grid) return std::nullopt;
    if (!nearly_equal(geom::measure_length(seg), length_px, 1e-6))
      return std::nullopt;
    if (!nearly_equal(fraction * canvas_w, length_px, 1e-9))
      return std::nullopt;
    return 0;
  }
  throw ConfigError("verify: unknown task '" + task + "'");
}

VerifyReport verify_labels(const std::vector<Json>& manifest_lines,
                           const Margins& margins) {
  VerifyReport report;
  for (const Json& line : manifest_lines) {
    const ProbeInstance inst = probe_instance_from_json(line);
    std::optional<int> expect;
    try {
      expect = recompute_label(inst.task, inst.meta, margins);
    } catch (const Json::exception& e) {
      throw ConfigError("verify: missing meta field in instance '" + inst.id +
                        "': " + e.what());
    }
    if (!expect.has_value()) {
      report.disagree.push_back({inst.id, "meta violates margin rules"});
    } else if (*expect != inst.label) {
      report.disagree.push_back(
          {inst.id, "label " + std::to_string(inst.label) +
                        " != recomputed " + std::to_string(*expect)});
    } else {
      ++report.agree;
    }
  }
  return report;
}

}  // namespace cogalign::probing
