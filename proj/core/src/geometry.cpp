#include "cogalign/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cogalign/error.hpp"

namespace cogalign::geom {

namespace {
constexpr double kDegPerRad = 180.0 / std::numbers::pi;
constexpr double kRadPerDeg = std::numbers::pi / 180.0;
}  // namespace

double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
double norm(Point2 a) { return std::hypot(a.x, a.y); }
double distance(Point2 a, Point2 b) { return norm(a - b); }

Point2 unit_dir(double deg) {
  const double r = deg * kRadPerDeg;
  return {std::cos(r), std::sin(r)};
}

std::string_view shape_kind_name(ShapeKind k) {
  switch (k) {
    case ShapeKind::circle:   return "circle";
    case ShapeKind::square:   return "square";
    case ShapeKind::triangle: return "triangle";
    case ShapeKind::star:     return "star";
    case ShapeKind::pentagon: return "pentagon";
  }
  return "circle";
}

ShapeKind parse_shape_kind(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(ShapeKind::pentagon); ++i) {
    auto k = static_cast<ShapeKind>(i);
    if (shape_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown shape kind: " + std::string(name));
}

std::string_view solid_kind_name(SolidKind k) {
  switch (k) {
    case SolidKind::cube:     return "cube";
    case SolidKind::sphere:   return "sphere";
    case SolidKind::cylinder: return "cylinder";
  }
  return "cube";
}

SolidKind parse_solid_kind(std::string_view name) {
  for (int i = 0; i <= static_cast<int>(SolidKind::cylinder); ++i) {
    auto k = static_cast<SolidKind>(i);
    if (solid_kind_name(k) == name) return k;
  }
  throw ConfigError("unknown solid kind: " + std::string(name));
}

double measure_length(const LineSegment& seg) {
  return distance(seg.p0, seg.p1);
}

double orientation_deg(const LineSegment& seg) {
  const Point2 d = seg.p1 - seg.p0;
  double deg = std::atan2(d.y, d.x) * kDegPerRad;
  deg = std::fmod(deg, 180.0);
  if (deg < 0) deg += 180.0;
  if (deg >= 180.0) deg = 0.0;
  return deg;
}

double measure_angle_between(const LineSegment& a, const LineSegment& b) {
  double diff = std::fabs(orientation_deg(a) - orientation_deg(b));
  if (diff > 90.0) diff = 180.0 - diff;
  return diff;
}

double center_distance(const CirclePair& p) {
  return distance(p.a_center, p.b_center);
}

double solid_volume(const Solid& s) {
  switch (s.kind) {
    case SolidKind::cube: {
      if (s.dims.size() != 1 || s.dims[0] <= 0)
        throw DomainError("cube requires one positive dim");
      const double e = s.dims[0];
      return e * e * e;
    }
    case SolidKind::sphere: {
      if (s.dims.size() != 1 || s.dims[0] <= 0)
        throw DomainError("sphere requires one positive dim");
      const double r = s.dims[0];
      return 4.0 / 3.0 * std::numbers::pi * r * r * r;
    }
    case SolidKind::cylinder: {
      if (s.dims.size() != 2 || s.dims[0] <= 0 || s.dims[1] <= 0)
        throw DomainError("cylinder requires two positive dims");
      const double r = s.dims[0], h = s.dims[1];
      return std::numbers::pi * r * r * h;
    }
  }
  throw DomainError("unknown solid kind");
}

std::string_view rel_position_name(RelPosition p) {
  switch (p) {
    case RelPosition::left_of:  return "left_of";
    case RelPosition::right_of: return "right_of";
    case RelPosition::above:    return "above";
    case RelPosition::below:    return "below";
  }
  return "left_of";
}

RelPosition opposite(RelPosition p) {
  switch (p) {
    case RelPosition::left_of:  return RelPosition::right_of;
    case RelPosition::right_of: return RelPosition::left_of;
    case RelPosition::above:    return RelPosition::below;
    case RelPosition::below:    return RelPosition::above;
  }
  return RelPosition::left_of;
}

RelPosition relative_position(const ShapeInstance& a, const ShapeInstance& b) {
  const double dx = a.center.x - b.center.x;
  const double dy = a.center.y - b.center.y;
  if (std::fabs(dx) == std::fabs(dy))
    throw DomainError("relative_position is ambiguous: |dx| == |dy|");
  if (std::fabs(dx) > std::fabs(dy))
    return dx < 0 ? RelPosition::left_of : RelPosition::right_of;
  return dy < 0 ? RelPosition::above : RelPosition::below;
}

Outline shape_outline(const ShapeInstance& s) {
  const double r = s.size;
  const Point2 c = s.center;
  auto regular = [&](int n, double start_deg) {
    std::vector<Point2> pts;
    pts.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      pts.push_back(c + unit_dir(start_deg + 360.0 * i / n) * r);
    }
    return pts;
  };
  switch (s.kind) {
    case ShapeKind::circle:
      return Circle{c, r};
    case ShapeKind::square:
      return regular(4, -135.0);  // axis-aligned, vertices at the diagonals
    case ShapeKind::triangle:
      return regular(3, -90.0);   // point up
    case ShapeKind::pentagon:
      return regular(5, -90.0);
    case ShapeKind::star: {
      // Pentagram outline: alternate outer/inner vertices, point up.
      // inner/outer ratio of a regular pentagram.
      constexpr double kInner = 0.3819660112501051;
      std::vector<Point2> pts;
      pts.reserve(10);
      for (int i = 0; i < 10; ++i) {
        const double rr = (i % 2 == 0) ? r : r * kInner;
        pts.push_back(c + unit_dir(-90.0 + 36.0 * i) * rr);
      }
      return pts;
    }
  }
  return Circle{c, r};
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  if (len2 == 0) return distance(p, a);
  double t = dot(p - a, ab) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return distance(p, a + ab * t);
}

namespace {

int orient_sign(Point2 a, Point2 b, Point2 c) {
  const double v = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
  if (v > 0) return 1;
  if (v < 0) return -1;
  return 0;
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

}  // namespace

bool segments_intersect(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  const int d1 = orient_sign(a0, a1, b0);
  const int d2 = orient_sign(a0, a1, b1);
  const int d3 = orient_sign(b0, b1, a0);
  const int d4 = orient_sign(b0, b1, a1);
  if (d1 != d2 && d3 != d4) return true;
  if (d1 == 0 && on_segment(a0, a1, b0)) return true;
  if (d2 == 0 && on_segment(a0, a1, b1)) return true;
  if (d3 == 0 && on_segment(b0, b1, a0)) return true;
  if (d4 == 0 && on_segment(b0, b1, a1)) return true;
  return false;
}

double segment_segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  return std::min(std::min(point_segment_distance(b0, a0, a1),
                           point_segment_distance(b1, a0, a1)),
                  std::min(point_segment_distance(a0, b0, b1),
                           point_segment_distance(a1, b0, b1)));
}

bool point_in_polygon(Point2 p, const std::vector<Point2>& poly) {
  // Even-odd crossing rule; boundary membership handled by distance checks
  // at call sites.
  bool inside = false;
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& pi = poly[i];
    const Point2& pj = poly[j];
    if ((pi.y > p.y) != (pj.y > p.y)) {
      const double x_cross = pj.x + (pi.x - pj.x) * (p.y - pj.y) / (pi.y - pj.y);
      if (p.x < x_cross) inside = !inside;
    }
  }
  return inside;
}

bool intersects(const LineSegment& seg, const ShapeInstance& s) {
  const Outline outline = shape_outline(s);
  if (const auto* circle = std::get_if<Circle>(&outline)) {
    return point_segment_distance(circle->center, seg.p0, seg.p1) <=
           circle->radius;
  }
  const auto& poly = std::get<std::vector<Point2>>(outline);
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    if (segments_intersect(seg.p0, seg.p1, poly[j], poly[i])) return true;
  }
  return point_in_polygon(seg.p0, poly) || point_in_polygon(seg.p1, poly);
}

double segment_outline_distance(const LineSegment& seg,
                                const ShapeInstance& s) {
  const Outline outline = shape_outline(s);
  if (const auto* circle = std::get_if<Circle>(&outline)) {
    return std::fabs(point_segment_distance(circle->center, seg.p0, seg.p1) -
                     circle->radius);
  }
  const auto& poly = std::get<std::vector<Point2>>(outline);
  double best = std::numeric_limits<double>::infinity();
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    best = std::min(best,
                    segment_segment_distance(seg.p0, seg.p1, poly[j], poly[i]));
  }
  return best;
}

double center_clearance(const ShapeInstance& s) {
  const Outline outline = shape_outline(s);
  if (const auto* circle = std::get_if<Circle>(&outline)) return circle->radius;
  const auto& poly = std::get<std::vector<Point2>>(outline);
  double best = std::numeric_limits<double>::infinity();
  const size_t n = poly.size();
  for (size_t i = 0, j = n - 1; i < n; j = i++) {
    best = std::min(best, point_segment_distance(s.center, poly[j], poly[i]));
  }
  return best;
}

double polyline_interpolate(const std::vector<double>& xs,
                            const std::vector<double>& ys, double x) {
  if (xs.size() < 2 || xs.size() != ys.size())
    throw DomainError("polyline needs >= 2 matched breakpoints");
  if (x < xs.front() || x > xs.back())
    throw DomainError("interpolation point outside breakpoint range");
  for (size_t i = 1; i < xs.size(); ++i) {
    if (x <= xs[i]) {
      const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
      return ys[i - 1] + (ys[i] - ys[i - 1]) * t;
    }
  }
  return ys.back();
}

double chart_interpolate(const ChartScene& c, double x) {
  return polyline_interpolate(c.xs, c.ys, x);
}

}  // namespace cogalign::geom
