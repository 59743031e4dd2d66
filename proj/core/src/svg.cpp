// SVG 1.1 emission from the shared draw-op list. Numeric attributes use
// fixed 3-decimal formatting; op coordinates are already quantized to the
// same grid, so the text parses back to bit-identical doubles.

#include <cstdio>
#include <sstream>

#include "cogalign/render.hpp"

namespace cogalign::render {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

std::string rgb_attr(Rgb c) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "rgb(%d,%d,%d)", c.r, c.g, c.b);
  return buf;
}

std::string points_attr(const std::vector<geom::Point2>& pts) {
  std::string s;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ' ';
    s += num(pts[i].x);
    s += ',';
    s += num(pts[i].y);
  }
  return s;
}

struct SvgWriter {
  std::ostringstream& out;

  void operator()(const StrokeSegment& s) {
    out << "<line x1=\"" << num(s.a.x) << "\" y1=\"" << num(s.a.y)
        << "\" x2=\"" << num(s.b.x) << "\" y2=\"" << num(s.b.y)
        << "\" stroke=\"" << rgb_attr(s.color) << "\" stroke-width=\""
        << num(s.width) << "\" stroke-linecap=\"round\"/>\n";
  }
  void operator()(const StrokePolyline& s) {
    out << "<polyline points=\"" << points_attr(s.pts)
        << "\" fill=\"none\" stroke=\"" << rgb_attr(s.color)
        << "\" stroke-width=\"" << num(s.width)
        << "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"/>\n";
  }
  void operator()(const StrokePath& s) {
    out << "<path d=\"";
    for (const auto& stroke : s.strokes) {
      for (size_t i = 0; i < stroke.size(); ++i) {
        out << (i == 0 ? "M " : "L ") << num(stroke[i].x) << ' '
            << num(stroke[i].y) << ' ';
      }
    }
    out << "\" fill=\"none\" stroke=\"" << rgb_attr(s.color)
        << "\" stroke-width=\"" << num(s.width)
        << "\" stroke-linecap=\"round\" stroke-linejoin=\"round\"";
    if (!s.svg_class.empty()) out << " class=\"" << s.svg_class << "\"";
    out << "/>\n";
  }
  void operator()(const FillPolygon& p) {
    out << "<polygon points=\"" << points_attr(p.pts) << "\" fill=\""
        << rgb_attr(p.color) << "\"/>\n";
  }
  void operator()(const FillCircle& c) {
    out << "<circle cx=\"" << num(c.center.x) << "\" cy=\"" << num(c.center.y)
        << "\" r=\"" << num(c.radius) << "\" fill=\"" << rgb_attr(c.color)
        << "\"/>\n";
  }
  void operator()(const StrokeCircle& c) {
    out << "<circle cx=\"" << num(c.center.x) << "\" cy=\"" << num(c.center.y)
        << "\" r=\"" << num(c.radius) << "\" fill=\"none\" stroke=\""
        << rgb_attr(c.color) << "\" stroke-width=\"" << num(c.width)
        << "\"/>\n";
  }
  void operator()(const FillEllipse& e) {
    out << "<ellipse cx=\"" << num(e.center.x) << "\" cy=\""
        << num(e.center.y) << "\" rx=\"" << num(e.rx) << "\" ry=\""
        << num(e.ry) << "\" fill=\"" << rgb_attr(e.color) << "\"/>\n";
  }
};

}  // namespace

std::string emit_svg_ops(const std::vector<DrawOp>& ops,
                         const CanvasSpec& canvas) {
  validate(canvas);
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
      << canvas.width << "\" height=\"" << canvas.height << "\" viewBox=\"0 0 "
      << canvas.width << ' ' << canvas.height << "\">\n";
  out << "<rect x=\"0\" y=\"0\" width=\"" << canvas.width << "\" height=\""
      << canvas.height << "\" fill=\"" << rgb_attr(rgb_of(canvas.background))
      << "\"/>\n";
  SvgWriter writer{out};
  for (const DrawOp& op : ops) std::visit(writer, op);
  out << "</svg>\n";
  return out.str();
}

std::string emit_svg(const geom::Scene& scene, const CanvasSpec& canvas) {
  return emit_svg_ops(scene_ops(scene, canvas), canvas);
}

}  // namespace cogalign::render
