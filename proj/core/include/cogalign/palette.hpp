#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "cogalign/error.hpp"

namespace cogalign {

// Named colors usable in scenes and templates. The name -> RGB table is
// frozen; see docs/formats.md.
enum class ColorName : uint8_t {
  black,
  white,
  red,
  blue,
  green,
  orange,
  purple,
  brown,
  gray,
};

inline constexpr int kColorCount = 9;

struct Rgb {
  uint8_t r = 0, g = 0, b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

constexpr Rgb rgb_of(ColorName c) {
  switch (c) {
    case ColorName::black:  return {0, 0, 0};
    case ColorName::white:  return {255, 255, 255};
    case ColorName::red:    return {230, 25, 25};
    case ColorName::blue:   return {25, 60, 230};
    case ColorName::green:  return {20, 150, 60};
    case ColorName::orange: return {245, 130, 20};
    case ColorName::purple: return {140, 40, 180};
    case ColorName::brown:  return {140, 90, 40};
    case ColorName::gray:   return {128, 128, 128};
  }
  return {0, 0, 0};
}

constexpr std::string_view color_name(ColorName c) {
  switch (c) {
    case ColorName::black:  return "black";
    case ColorName::white:  return "white";
    case ColorName::red:    return "red";
    case ColorName::blue:   return "blue";
    case ColorName::green:  return "green";
    case ColorName::orange: return "orange";
    case ColorName::purple: return "purple";
    case ColorName::brown:  return "brown";
    case ColorName::gray:   return "gray";
  }
  return "black";
}

inline ColorName parse_color(std::string_view name) {
  for (int i = 0; i < kColorCount; ++i) {
    auto c = static_cast<ColorName>(i);
    if (color_name(c) == name) return c;
  }
  throw ConfigError("unknown color name: " + std::string(name));
}

// Colors eligible for scene objects (background stays white, outlines black).
inline constexpr std::array<ColorName, 6> kObjectColors = {
    ColorName::red,    ColorName::blue,  ColorName::green,
    ColorName::orange, ColorName::purple, ColorName::brown,
};

}  // namespace cogalign
