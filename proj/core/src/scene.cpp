// Scene lowering: converts scene elements to the flat draw-op list shared by
// the rasterizer and the SVG emitter.

#include <algorithm>
#include <cmath>
#include <string>

#include "cogalign/error.hpp"
#include "cogalign/glyphs.hpp"
#include "cogalign/render.hpp"

namespace cogalign::render {

using geom::ChartScene;
using geom::CirclePair;
using geom::Dot;
using geom::LineSegment;
using geom::Point2;
using geom::Scene;
using geom::ShapeInstance;
using geom::Solid;
using geom::unit_dir;
using geom::Wedge;

double quantize3(double v) { return std::round(v * 1000.0) / 1000.0; }

void validate(const CanvasSpec& canvas) {
  if (canvas.width < 64 || canvas.height < 64)
    throw ConfigError("canvas must be at least 64x64");
  if (canvas.supersample != 1 && canvas.supersample != 2 &&
      canvas.supersample != 4)
    throw ConfigError("supersample must be one of 1, 2, 4");
  if (canvas.stroke_width <= 0) throw ConfigError("stroke_width must be > 0");
}

namespace {

Point2 qp(Point2 p) { return {quantize3(p.x), quantize3(p.y)}; }

std::vector<Point2> qpts(std::vector<Point2> pts) {
  for (auto& p : pts) p = qp(p);
  return pts;
}

Rgb shade(Rgb c, double f) {
  auto mix = [&](uint8_t ch) {
    const double target = f >= 0 ? 255.0 : 0.0;
    const double t = std::fabs(f);
    return static_cast<uint8_t>(
        std::clamp<long>(std::lround(ch + (target - ch) * t), 0, 255));
  };
  return {mix(c.r), mix(c.g), mix(c.b)};
}

// Points along an ellipse arc, inclusive of both endpoints.
std::vector<Point2> ellipse_arc(Point2 c, double rx, double ry,
                                double deg0, double deg1, int n) {
  std::vector<Point2> pts;
  pts.reserve(static_cast<size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    const double deg = deg0 + (deg1 - deg0) * i / n;
    const Point2 d = unit_dir(deg);
    pts.push_back({c.x + rx * d.x, c.y + ry * d.y});
  }
  return pts;
}

int arc_segments(double sweep_deg) {
  return std::max(12, static_cast<int>(std::ceil(std::fabs(sweep_deg) / 2.0)));
}

struct Lowerer {
  const CanvasSpec& canvas;
  std::vector<DrawOp> ops;
  double scale;  // canvas scale factor relative to the 448-pixel reference

  explicit Lowerer(const CanvasSpec& c)
      : canvas(c), scale(std::min(c.width, c.height) / 448.0) {}

  void require_in_canvas(double x0, double y0, double x1, double y1,
                         const char* what) {
    if (x0 < 0 || y0 < 0 || x1 > canvas.width || y1 > canvas.height) {
      throw DomainError(std::string("scene element out of bounds: ") + what);
    }
  }

  Point2 clamp_in(Point2 p, double margin) const {
    return {std::clamp(p.x, margin, canvas.width - margin),
            std::clamp(p.y, margin, canvas.height - margin)};
  }

  void add_text(std::string_view text, Point2 origin, double height,
                TextAnchor anchor, Rgb color, std::string svg_class = "") {
    StrokePath path;
    path.width = quantize3(std::max(1.1, height * 0.16));
    path.color = color;
    path.svg_class = std::move(svg_class);
    for (auto& stroke : text_strokes(text, origin, height, anchor)) {
      path.strokes.push_back(qpts(std::move(stroke)));
    }
    ops.push_back(std::move(path));
  }

  // Letter tag next to an element, pulled toward the canvas center and
  // clamped inside.
  void add_label(const std::string& text, Point2 near, Point2 away_dir,
                 double offset) {
    const double h = std::max(12.0, 18.0 * scale);
    Point2 pos = near + away_dir * offset;
    pos = clamp_in(pos, h);
    add_text(text, {pos.x, pos.y - h / 2}, h, TextAnchor::center,
             rgb_of(ColorName::black));
  }

  void lower(const LineSegment& seg) {
    require_in_canvas(std::min(seg.p0.x, seg.p1.x), std::min(seg.p0.y, seg.p1.y),
                      std::max(seg.p0.x, seg.p1.x), std::max(seg.p0.y, seg.p1.y),
                      "line segment");
    ops.push_back(StrokeSegment{qp(seg.p0), qp(seg.p1),
                                quantize3(canvas.stroke_width),
                                rgb_of(seg.color)});
    if (seg.label) {
      const Point2 mid = (seg.p0 + seg.p1) * 0.5;
      const Point2 d = seg.p1 - seg.p0;
      const double len = geom::norm(d);
      Point2 n = len > 0 ? Point2{-d.y / len, d.x / len} : Point2{0, -1};
      const Point2 center{canvas.width / 2.0, canvas.height / 2.0};
      if (geom::dot(n, center - mid) < 0) n = n * -1.0;
      add_label(*seg.label, mid, n, std::max(14.0, 18.0 * scale));
    }
  }

  void lower(const Wedge& w) {
    require_in_canvas(w.vertex.x - w.radius, w.vertex.y - w.radius,
                      w.vertex.x + w.radius, w.vertex.y + w.radius, "wedge");
    const Rgb color = rgb_of(w.color);
    const double sw = quantize3(canvas.stroke_width);
    const Point2 d0 = unit_dir(w.start_deg);
    const Point2 d1 = unit_dir(w.start_deg + w.sweep_deg);
    ops.push_back(StrokeSegment{qp(w.vertex), qp(w.vertex + d0 * w.radius), sw,
                                color});
    ops.push_back(StrokeSegment{qp(w.vertex), qp(w.vertex + d1 * w.radius), sw,
                                color});
    StrokePath arc;
    arc.width = sw;
    arc.color = color;
    arc.strokes.push_back(
        qpts(ellipse_arc(w.vertex, w.radius, w.radius, w.start_deg,
                         w.start_deg + w.sweep_deg, arc_segments(w.sweep_deg))));
    ops.push_back(std::move(arc));
    if (w.label) {
      const Point2 bisector = unit_dir(w.start_deg + w.sweep_deg / 2);
      add_label(*w.label, w.vertex, bisector * -1.0,
                std::max(16.0, w.radius * 0.28));
    }
  }

  void lower(const CirclePair& p) {
    for (const Point2 c : {p.a_center, p.b_center}) {
      require_in_canvas(c.x - p.radius, c.y - p.radius, c.x + p.radius,
                        c.y + p.radius, "circle pair");
      ops.push_back(StrokeCircle{qp(c), quantize3(p.radius),
                                 quantize3(canvas.stroke_width),
                                 rgb_of(p.color)});
    }
  }

  void lower(const ShapeInstance& s) {
    require_in_canvas(s.center.x - s.size, s.center.y - s.size,
                      s.center.x + s.size, s.center.y + s.size, "shape");
    const geom::Outline outline = geom::shape_outline(s);
    if (const auto* circle = std::get_if<geom::Circle>(&outline)) {
      ops.push_back(FillCircle{qp(circle->center), quantize3(circle->radius),
                               rgb_of(s.color)});
    } else {
      ops.push_back(
          FillPolygon{qpts(std::get<std::vector<Point2>>(outline)),
                      rgb_of(s.color)});
    }
  }

  void lower(const Dot& d) {
    require_in_canvas(d.center.x - d.radius, d.center.y - d.radius,
                      d.center.x + d.radius, d.center.y + d.radius, "dot");
    ops.push_back(
        FillCircle{qp(d.center), quantize3(d.radius), rgb_of(d.color)});
  }

  void lower(const geom::SolidGlyph& g) { lower_solid_at(g.solid, g.center); }

  void lower_solid_at(const Solid& s, Point2 center) {
    const Rgb color = rgb_of(s.color);
    const Rgb outline = rgb_of(ColorName::black);
    const double ow = quantize3(std::max(1.6, 2.0 * scale));
    switch (s.kind) {
      case geom::SolidKind::cube: {
        const double radius = 0.62 * s.dims[0];
        require_in_canvas(center.x - radius, center.y - radius,
                          center.x + radius, center.y + radius, "cube");
        Point2 hex[6];
        for (int i = 0; i < 6; ++i)
          hex[i] = center + unit_dir(-90.0 + 60.0 * i) * radius;
        const Point2 v_top = hex[0], v_tr = hex[1], v_br = hex[2],
                     v_bot = hex[3], v_bl = hex[4], v_tl = hex[5];
        ops.push_back(FillPolygon{qpts({v_top, v_tr, center, v_tl}),
                                  shade(color, 0.45)});
        ops.push_back(FillPolygon{qpts({v_tr, v_br, v_bot, center}), color});
        ops.push_back(FillPolygon{qpts({v_tl, center, v_bot, v_bl}),
                                  shade(color, -0.3)});
        StrokePath edges;
        edges.width = ow;
        edges.color = outline;
        edges.strokes.push_back(
            qpts({v_top, v_tr, v_br, v_bot, v_bl, v_tl, v_top}));
        edges.strokes.push_back(qpts({v_tr, center}));
        edges.strokes.push_back(qpts({v_tl, center}));
        edges.strokes.push_back(qpts({center, v_bot}));
        ops.push_back(std::move(edges));
        break;
      }
      case geom::SolidKind::sphere: {
        const double r = s.dims[0];
        require_in_canvas(center.x - r, center.y - r, center.x + r,
                          center.y + r, "sphere");
        ops.push_back(FillCircle{qp(center), quantize3(r), color});
        StrokePath equator;
        equator.width = quantize3(std::max(1.2, 1.6 * scale));
        equator.color = shade(color, -0.35);
        equator.strokes.push_back(
            qpts(ellipse_arc(center, r * 0.96, r * 0.34, 0.0, 180.0, 48)));
        ops.push_back(std::move(equator));
        ops.push_back(StrokeCircle{qp(center), quantize3(r), ow, outline});
        break;
      }
      case geom::SolidKind::cylinder: {
        const double r = s.dims[0];
        const double h = s.dims[1];
        const double ry = 0.32 * r;
        require_in_canvas(center.x - r, center.y - h / 2 - ry, center.x + r,
                          center.y + h / 2 + ry, "cylinder");
        const Point2 top_c{center.x, center.y - h / 2};
        const Point2 bot_c{center.x, center.y + h / 2};
        std::vector<Point2> body;
        body.push_back({center.x - r, top_c.y});
        for (Point2 p : ellipse_arc(bot_c, r, ry, 180.0, 0.0, 36))
          body.push_back(p);
        body.push_back({center.x + r, top_c.y});
        ops.push_back(FillPolygon{qpts(std::move(body)), color});
        auto rim = ellipse_arc(top_c, r, ry, 0.0, 360.0, 72);
        ops.push_back(
            FillEllipse{qp(top_c), quantize3(r), quantize3(ry),
                        shade(color, 0.35)});
        StrokePath lines;
        lines.width = ow;
        lines.color = outline;
        lines.strokes.push_back(
            qpts({{center.x - r, top_c.y}, {center.x - r, bot_c.y}}));
        lines.strokes.push_back(
            qpts({{center.x + r, top_c.y}, {center.x + r, bot_c.y}}));
        lines.strokes.push_back(qpts(ellipse_arc(bot_c, r, ry, 0.0, 180.0, 36)));
        lines.strokes.push_back(qpts(std::move(rim)));
        ops.push_back(std::move(lines));
        break;
      }
    }
  }

  void lower(const ChartScene& chart) {
    if (chart.xs.size() < 2 || chart.xs.size() != chart.ys.size())
      throw DomainError("chart needs >= 2 matched breakpoints");
    const double w = canvas.width, h = canvas.height;
    const double left = 0.145 * w, right = 0.05 * w;
    const double top = 0.06 * h, bottom = 0.09 * h;
    const auto map_x = [&](double x) {
      return left + x / 100.0 * (w - left - right);
    };
    const auto map_y = [&](double y) {
      return (h - bottom) - y / 100.0 * (h - top - bottom);
    };
    const double tick_h = std::max(8.0, 11.0 * scale);
    // Tick labels must fit to the left of the axis.
    require_in_canvas(left - 8.0 * scale - text_width("100", tick_h), top,
                      w - right, h - bottom, "chart");

    const Rgb black = rgb_of(ColorName::black);
    const double axis_w = quantize3(std::max(1.4, 2.0 * scale));
    // Axes.
    ops.push_back(StrokeSegment{qp({left, map_y(100.0) - 6.0 * scale}),
                                qp({left, map_y(0.0)}), axis_w, black});
    ops.push_back(StrokeSegment{qp({left, map_y(0.0)}),
                                qp({w - right, map_y(0.0)}), axis_w, black});
    // Y ticks every y_tick_step with digit labels.
    const double tick_w = quantize3(std::max(1.2, 1.6 * scale));
    for (double v = 0.0; v <= 100.0 + 1e-9; v += chart.y_tick_step) {
      const double py = map_y(v);
      ops.push_back(StrokeSegment{qp({left - 5.0 * scale, py}), qp({left, py}),
                                  tick_w, black});
      const std::string text = std::to_string(static_cast<int>(std::lround(v)));
      add_text(text, {left - 8.0 * scale, py - tick_h / 2}, tick_h,
               TextAnchor::right, black, "tick-label");
    }
    // Data polyline.
    StrokePolyline line;
    line.width = quantize3(canvas.stroke_width);
    line.color = black;
    for (size_t i = 0; i < chart.xs.size(); ++i) {
      line.pts.push_back(qp({map_x(chart.xs[i]), map_y(chart.ys[i])}));
    }
    ops.push_back(std::move(line));
    // The red dot.
    ops.push_back(FillCircle{qp({map_x(chart.dot_x), map_y(chart.dot_y)}),
                             quantize3(std::max(3.5, 5.0 * scale)),
                             rgb_of(ColorName::red)});
  }
};

}  // namespace

geom::Point2 solid_visual_extent(const Solid& s) {
  switch (s.kind) {
    case geom::SolidKind::cube: {
      const double r = 0.62 * s.dims[0];
      return {r, r};
    }
    case geom::SolidKind::sphere:
      return {s.dims[0], s.dims[0]};
    case geom::SolidKind::cylinder: {
      const double r = s.dims[0];
      return {r, s.dims[1] / 2 + 0.32 * r};
    }
  }
  return {0, 0};
}

std::vector<DrawOp> scene_ops(const Scene& scene, const CanvasSpec& canvas) {
  validate(canvas);
  Lowerer lw(canvas);
  for (const auto& el : scene.elements) {
    std::visit([&](const auto& e) { lw.lower(e); }, el);
  }
  return lw.ops;
}

}  // namespace cogalign::render
