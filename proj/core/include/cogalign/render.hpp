#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "cogalign/palette.hpp"
#include "cogalign/scene.hpp"

namespace cogalign::render {

struct CanvasSpec {
  int width = 448;
  int height = 448;
  ColorName background = ColorName::white;
  double stroke_width = 3.0;
  int supersample = 4;  // box-filter anti-aliasing factor, one of {1,2,4}
};

void validate(const CanvasSpec& canvas);

// ---------------------------------------------------------------------------
// Draw ops
//
// Scenes lower to a flat op list before rasterizing; the SVG emitter walks
// the same list, so both outputs depict identical geometry. Every coordinate
// is quantized to 3 decimals at lowering time: the SVG text then round-trips
// to bit-identical doubles and a re-render from parsed SVG reproduces the
// raster exactly. Arcs and ellipse rims are polygonized here for the same
// reason.
// ---------------------------------------------------------------------------

struct StrokeSegment {  // <line>, round caps
  geom::Point2 a, b;
  double width = 1;
  Rgb color;
};

struct StrokePolyline {  // <polyline>, round caps/joins
  std::vector<geom::Point2> pts;
  double width = 1;
  Rgb color;
};

struct StrokePath {  // <path> of M/L polylines (glyph text, polygonized arcs)
  std::vector<std::vector<geom::Point2>> strokes;
  double width = 1;
  Rgb color;
  std::string svg_class;  // optional class attribute, e.g. "tick-label"
};

struct FillPolygon {  // <polygon>
  std::vector<geom::Point2> pts;
  Rgb color;
};

struct FillCircle {  // <circle>
  geom::Point2 center;
  double radius = 0;
  Rgb color;
};

struct StrokeCircle {  // <circle fill="none">
  geom::Point2 center;
  double radius = 0;
  double width = 1;
  Rgb color;
};

struct FillEllipse {  // <ellipse>
  geom::Point2 center;
  double rx = 0, ry = 0;
  Rgb color;
};

using DrawOp = std::variant<StrokeSegment, StrokePolyline, StrokePath,
                            FillPolygon, FillCircle, StrokeCircle, FillEllipse>;

// Round to 3 decimals; matches the fixed SVG attribute formatting.
double quantize3(double v);

// Lower a scene to draw ops. Validates element bounds against the canvas and
// throws DomainError for out-of-bounds geometry.
std::vector<DrawOp> scene_ops(const geom::Scene& scene,
                              const CanvasSpec& canvas);

// Half-extents (x, y) of a solid's rendered footprint around its anchor;
// generators use this for placement margins.
geom::Point2 solid_visual_extent(const geom::Solid& s);

// ---------------------------------------------------------------------------
// Raster output
// ---------------------------------------------------------------------------

struct Raster {
  int width = 0, height = 0;
  std::vector<uint8_t> rgb;  // row-major, 3 bytes per pixel

  Rgb at(int x, int y) const {
    const size_t i = (static_cast<size_t>(y) * width + x) * 3;
    return {rgb[i], rgb[i + 1], rgb[i + 2]};
  }
};

Raster render_ops(const std::vector<DrawOp>& ops, const CanvasSpec& canvas);
Raster render_scene(const geom::Scene& scene, const CanvasSpec& canvas);

// Deterministic PNG bytes: 8-bit RGB, chunks IHDR/IDAT/IEND only, filter 0
// on every row, zlib level 6. See docs/formats.md.
std::vector<uint8_t> render_png(const geom::Scene& scene,
                                const CanvasSpec& canvas);

// SVG 1.1 text; element order equals scene order; numbers printed with
// fixed 3-decimal formatting.
std::string emit_svg(const geom::Scene& scene, const CanvasSpec& canvas);
std::string emit_svg_ops(const std::vector<DrawOp>& ops,
                         const CanvasSpec& canvas);

}  // namespace cogalign::render
