#pragma once

#include <variant>
#include <vector>

#include "cogalign/geometry.hpp"

namespace cogalign::geom {

// Filled disc marker (the chart's red dot, drawn standalone in tests).
struct Dot {
  Point2 center;
  double radius = 0;
  ColorName color = ColorName::red;
};

// A solid plus its screen placement. Solid itself carries only dims (volume
// is a function of dims alone); scenes anchor it here.
struct SolidGlyph {
  Solid solid;
  Point2 center;
};

using SceneElement =
    std::variant<LineSegment, Wedge, CirclePair, ShapeInstance, SolidGlyph,
                 ChartScene, Dot>;

// Exact geometric description of one image. Pixels and labels both derive
// from this; element order is paint order.
struct Scene {
  std::vector<SceneElement> elements;
};

}  // namespace cogalign::geom
