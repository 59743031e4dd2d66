#include "cogalign/glyphs.hpp"

#include <map>

#include "cogalign/error.hpp"

namespace cogalign::render {

namespace {

using geom::Point2;

Glyph make(std::initializer_list<std::initializer_list<Point2>> strokes) {
  Glyph g;
  for (const auto& s : strokes) g.strokes.emplace_back(s);
  return g;
}

const std::map<char, Glyph>& glyph_table() {
  static const std::map<char, Glyph> table = {
      {'0', make({{{1, 0}, {3, 0}, {4, 1}, {4, 5}, {3, 6}, {1, 6}, {0, 5}, {0, 1}, {1, 0}}})},
      {'1', make({{{1, 1}, {2, 0}, {2, 6}}, {{1, 6}, {3, 6}}})},
      {'2', make({{{0, 1}, {1, 0}, {3, 0}, {4, 1}, {4, 2}, {0, 5}, {0, 6}, {4, 6}}})},
      {'3', make({{{0, 1}, {1, 0}, {3, 0}, {4, 1}, {4, 2}, {3, 3}, {1, 3}},
                  {{3, 3}, {4, 4}, {4, 5}, {3, 6}, {1, 6}, {0, 5}}})},
      {'4', make({{{3, 6}, {3, 0}, {0, 4}, {4, 4}}})},
      {'5', make({{{4, 0}, {0, 0}, {0, 3}, {3, 3}, {4, 4}, {4, 5}, {3, 6}, {1, 6}, {0, 5}}})},
      {'6', make({{{3, 0}, {1, 0}, {0, 1}, {0, 5}, {1, 6}, {3, 6}, {4, 5}, {4, 4}, {3, 3}, {0, 3}}})},
      {'7', make({{{0, 0}, {4, 0}, {1.5, 6}}})},
      {'8', make({{{1, 0}, {3, 0}, {4, 1}, {4, 2}, {3, 3}, {1, 3}, {0, 2}, {0, 1}, {1, 0}},
                  {{1, 3}, {3, 3}, {4, 4}, {4, 5}, {3, 6}, {1, 6}, {0, 5}, {0, 4}, {1, 3}}})},
      {'9', make({{{1, 6}, {3, 6}, {4, 5}, {4, 1}, {3, 0}, {1, 0}, {0, 1}, {0, 2}, {1, 3}, {4, 3}}})},
      {'A', make({{{0, 6}, {2, 0}, {4, 6}}, {{1, 4}, {3, 4}}})},
      {'B', make({{{0, 0}, {0, 6}},
                  {{0, 0}, {3, 0}, {4, 1}, {4, 2}, {3, 3}, {0, 3}},
                  {{3, 3}, {4, 4}, {4, 5}, {3, 6}, {0, 6}}})},
      {'C', make({{{4, 1}, {3, 0}, {1, 0}, {0, 1}, {0, 5}, {1, 6}, {3, 6}, {4, 5}}})},
      {'S', make({{{4, 1}, {3, 0}, {1, 0}, {0, 1}, {0, 2}, {1, 3}, {3, 3}, {4, 4}, {4, 5}, {3, 6}, {1, 6}, {0, 5}}})},
      {'X', make({{{0, 0}, {4, 6}}, {{4, 0}, {0, 6}}})},
  };
  return table;
}

}  // namespace

bool glyph_supported(char c) { return glyph_table().count(c) > 0; }

const Glyph& glyph_for(char c) {
  const auto& table = glyph_table();
  auto it = table.find(c);
  if (it == table.end())
    throw DomainError(std::string("no glyph for character '") + c + "'");
  return it->second;
}

double text_width(std::string_view text, double height) {
  if (text.empty()) return 0.0;
  const double scale = height / kGlyphHeight;
  return (kGlyphAdvance * (static_cast<double>(text.size()) - 1) + kGlyphWidth) *
         scale;
}

std::vector<std::vector<Point2>> text_strokes(std::string_view text,
                                              Point2 origin, double height,
                                              TextAnchor anchor) {
  const double scale = height / kGlyphHeight;
  double x = origin.x;
  const double w = text_width(text, height);
  if (anchor == TextAnchor::center) x -= w / 2;
  if (anchor == TextAnchor::right) x -= w;

  std::vector<std::vector<Point2>> out;
  for (char c : text) {
    const Glyph& g = glyph_for(c);
    for (const auto& stroke : g.strokes) {
      std::vector<Point2> pts;
      pts.reserve(stroke.size());
      for (Point2 p : stroke) {
        pts.push_back({x + p.x * scale, origin.y + p.y * scale});
      }
      out.push_back(std::move(pts));
    }
    x += kGlyphAdvance * scale;
  }
  return out;
}

}  // namespace cogalign::render
