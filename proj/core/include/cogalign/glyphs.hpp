#pragma once

#include <string_view>
#include <vector>

#include "cogalign/geometry.hpp"

namespace cogalign::render {

// Embedded stroke-based vector glyphs for digits and the label letters
// A B C S X. No system fonts are touched, so output bytes are identical on
// every platform. Each glyph is a set of polylines on a 4x6 grid, y down.
struct Glyph {
  std::vector<std::vector<geom::Point2>> strokes;
};

// Throws DomainError for characters outside the supported set.
const Glyph& glyph_for(char c);

bool glyph_supported(char c);

// Grid metrics: glyphs are 4 wide, 6 tall; advance adds inter-glyph spacing.
inline constexpr double kGlyphWidth = 4.0;
inline constexpr double kGlyphHeight = 6.0;
inline constexpr double kGlyphAdvance = 5.6;

enum class TextAnchor { left, center, right };

// Polylines for a text run, scaled so the glyph grid height maps to
// `height` pixels. `origin` is the anchor point of the text box top edge.
std::vector<std::vector<geom::Point2>> text_strokes(std::string_view text,
                                                    geom::Point2 origin,
                                                    double height,
                                                    TextAnchor anchor);

// Width in pixels of a rendered text run at the given height.
double text_width(std::string_view text, double height);

}  // namespace cogalign::render
