#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cogalign/palette.hpp"

namespace cogalign::geom {

// Screen coordinates throughout: origin top-left, y grows downward, so
// "above" means smaller y. One unit = one canvas pixel.

struct Point2 {
  double x = 0, y = 0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }

double dot(Point2 a, Point2 b);
double norm(Point2 a);
double distance(Point2 a, Point2 b);

struct LineSegment {
  Point2 p0, p1;
  ColorName color = ColorName::black;
  std::optional<std::string> label;  // glyph tag such as "X"
};

// Circular-sector glyph; sweep_deg is the labeled angular magnitude.
struct Wedge {
  Point2 vertex;
  double start_deg = 0;   // [0, 360)
  double sweep_deg = 0;   // (0, 180]
  double radius = 0;
  ColorName color = ColorName::black;
  std::optional<std::string> label;
};

// Two disjoint circles of equal radius; "distance" is center-to-center.
struct CirclePair {
  Point2 a_center, b_center;
  double radius = 0;
  ColorName color = ColorName::black;
};

enum class ShapeKind : uint8_t { circle, square, triangle, star, pentagon };

std::string_view shape_kind_name(ShapeKind k);
ShapeKind parse_shape_kind(std::string_view name);

// A filled 2D shape; size is the circumradius of its outline.
struct ShapeInstance {
  ShapeKind kind = ShapeKind::circle;
  ColorName color = ColorName::black;
  Point2 center;
  double size = 0;
};

enum class SolidKind : uint8_t { cube, sphere, cylinder };

std::string_view solid_kind_name(SolidKind k);
SolidKind parse_solid_kind(std::string_view name);

// dims: cube {edge}, sphere {radius}, cylinder {radius, height}.
struct Solid {
  SolidKind kind = SolidKind::cube;
  std::vector<double> dims;
  ColorName color = ColorName::black;
};

// Data-space chart: xs ascending breakpoints, ys in [0,100], dot exactly on
// the polyline. The y axis carries ticks every 10 units.
struct ChartScene {
  std::vector<double> xs;
  std::vector<double> ys;
  double dot_x = 0;
  double dot_y = 0;
  double y_tick_step = 10.0;
};

// ---------------------------------------------------------------------------
// Measures and predicates
// ---------------------------------------------------------------------------

double measure_length(const LineSegment& seg);

// Acute angle between the carrier lines, in degrees, in [0, 90].
double measure_angle_between(const LineSegment& a, const LineSegment& b);

// Carrier-line direction in degrees, in [0, 180). Slope equality is defined
// as orientation equality, which stays finite for vertical lines.
double orientation_deg(const LineSegment& seg);

double center_distance(const CirclePair& p);

double solid_volume(const Solid& s);

enum class RelPosition : uint8_t { left_of, right_of, above, below };

std::string_view rel_position_name(RelPosition p);
RelPosition opposite(RelPosition p);

// Relation of a w.r.t. b along the axis of larger |delta|. Throws DomainError
// when |dx| == |dy| (generation never emits such scenes).
RelPosition relative_position(const ShapeInstance& a, const ShapeInstance& b);

// Exact outline used by both the rasterizer and the intersection predicate.
struct Circle {
  Point2 center;
  double radius = 0;
};
using Outline = std::variant<Circle, std::vector<Point2>>;

Outline shape_outline(const ShapeInstance& s);

// True iff the segment meets the closed region of the shape.
bool intersects(const LineSegment& seg, const ShapeInstance& s);

// ---------------------------------------------------------------------------
// Helpers shared by generators (margins) and the predicate above
// ---------------------------------------------------------------------------

double point_segment_distance(Point2 p, Point2 a, Point2 b);
double segment_segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1);
bool segments_intersect(Point2 a0, Point2 a1, Point2 b0, Point2 b1);
bool point_in_polygon(Point2 p, const std::vector<Point2>& poly);

// Minimum distance from the segment to the shape boundary; 0 if they touch.
double segment_outline_distance(const LineSegment& seg, const ShapeInstance& s);

// Minimum distance from the shape's center to its own outline (the deepest
// interior clearance available for intersection margins).
double center_clearance(const ShapeInstance& s);

// Interpolate the chart polyline at x (piecewise linear; xs must be
// ascending and bracket x).
double chart_interpolate(const ChartScene& c, double x);

// Piecewise-linear interpolation over raw breakpoint arrays.
double polyline_interpolate(const std::vector<double>& xs,
                            const std::vector<double>& ys, double x);

// Unit vector at angle deg (screen coords; positive angles turn clockwise
// visually because y grows downward).
Point2 unit_dir(double deg);

}  // namespace cogalign::geom
