#include "cogalign/prefgen.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <semaphore>

#include "cogalign/error.hpp"
#include "cogalign/log.hpp"
#include "cogalign/parallel.hpp"
#include "cogalign/png_io.hpp"
#include "cogalign/render.hpp"
#include "cogalign/version.hpp"

namespace cogalign::pref {

namespace fs = std::filesystem;
using geom::CirclePair;
using geom::LineSegment;
using geom::Point2;
using geom::Scene;
using geom::ShapeInstance;
using geom::Solid;
using geom::SolidGlyph;
using geom::Wedge;

namespace {

constexpr double kEqualTol = 1e-9;
constexpr int kPlacementTries = 100;
constexpr std::string_view kLetters[] = {"A", "B", "C", "S", "X"};

bool nearly_equal(double a, double b) {
  return std::fabs(a - b) <= kEqualTol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

Json point_json(Point2 p) { return Json::array({p.x, p.y}); }

std::pair<ColorName, ColorName> two_colors(RandomStream& s) {
  const int a = static_cast<int>(s.uniform_int(0, kObjectColors.size() - 1));
  const int b = (a + 1 + static_cast<int>(s.uniform_int(
                             0, kObjectColors.size() - 2))) %
                static_cast<int>(kObjectColors.size());
  return {kObjectColors[static_cast<size_t>(a)],
          kObjectColors[static_cast<size_t>(b)]};
}

std::pair<std::string, std::string> two_letters(RandomStream& s) {
  const int a = static_cast<int>(s.uniform_int(0, std::size(kLetters) - 1));
  const int b = (a + 1 + static_cast<int>(
                             s.uniform_int(0, std::size(kLetters) - 2))) %
                static_cast<int>(std::size(kLetters));
  return {std::string(kLetters[static_cast<size_t>(a)]),
          std::string(kLetters[static_cast<size_t>(b)])};
}

std::string pad6(int v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06d", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Scene builders. Outcome class indices:
//   3-way comparisons: 0 = first entity greater, 1 = second greater, 2 = same
//   position: RelPosition value of shape A w.r.t. shape B
//   slope: 0 = only first matches, 1 = only second, 2 = both, 3 = neither
//   intersection: 0 = intersecting, 1 = clear
// ---------------------------------------------------------------------------

BuiltPair build_angle(int cls, RandomStream& s, const Margins& m,
                      const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  double sweep_a, sweep_b;
  if (cls == 2) {
    sweep_a = sweep_b = s.uniform(15.0, 160.0);
  } else {
    const double hi = s.uniform(15.0 + m.angle_deg, 160.0);
    const double lo = s.uniform(15.0, hi - m.angle_deg);
    sweep_a = cls == 0 ? hi : lo;
    sweep_b = cls == 0 ? lo : hi;
  }
  const auto [ca, cb] = two_colors(s);
  const auto [la, lb] = two_letters(s);
  auto make_wedge = [&](double sweep, ColorName color, const std::string& tag,
                        double x_lo, double x_hi) {
    Wedge wd;
    wd.radius = s.uniform(0.13 * mm, 0.19 * mm);
    wd.vertex.x = s.uniform(x_lo + wd.radius + 8, x_hi - wd.radius - 8);
    wd.vertex.y = s.uniform(wd.radius + 28, h - wd.radius - 8);
    wd.start_deg = s.uniform(0.0, 360.0);
    wd.sweep_deg = sweep;
    wd.color = color;
    wd.label = tag;
    return wd;
  };
  const Wedge wa = make_wedge(sweep_a, ca, la, 0.0, w / 2);
  const Wedge wb = make_wedge(sweep_b, cb, lb, w / 2, w);

  auto wedge_meta = [](const Wedge& wd) {
    Json j;
    j["vertex"] = point_json(wd.vertex);
    j["start_deg"] = wd.start_deg;
    j["sweep_deg"] = wd.sweep_deg;
    j["radius"] = wd.radius;
    j["color"] = std::string(color_name(wd.color));
    j["letter"] = *wd.label;
    return j;
  };
  BuiltPair out;
  out.scene.elements = {wa, wb};
  out.meta["wedges"] = Json::array({wedge_meta(wa), wedge_meta(wb)});
  return out;
}

BuiltPair build_length(int cls, RandomStream& s, const Margins& m,
                       const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  BuiltPair out;
  for (;;) {
    double len_a, len_b;
    if (cls == 2) {
      len_a = len_b = s.uniform(0.16 * mm, 0.5 * mm);
    } else {
      const double lo = s.uniform(0.16 * mm, 0.45 * mm);
      const double hi = lo * s.uniform(m.length_ratio, 1.6);
      if (hi > 0.55 * mm) continue;
      len_a = cls == 0 ? hi : lo;
      len_b = cls == 0 ? lo : hi;
    }
    const auto [ca, cb] = two_colors(s);
    const auto [la, lb] = two_letters(s);
    auto sample_segment = [&](double len, ColorName color,
                              const std::string& tag) {
      const double theta = s.uniform(0.0, 180.0);
      const Point2 d = geom::unit_dir(theta);
      const double ex = std::fabs(d.x) * len / 2 + 8;
      const double ey = std::fabs(d.y) * len / 2 + 8;
      const Point2 mid{s.uniform(ex, w - ex), s.uniform(ey, h - ey)};
      return LineSegment{mid - d * (len / 2), mid + d * (len / 2), color, tag};
    };
    LineSegment sa, sb;
    bool placed = false;
    for (int tries = 0; tries < kPlacementTries; ++tries) {
      sa = sample_segment(len_a, ca, la);
      sb = sample_segment(len_b, cb, lb);
      if (geom::segment_segment_distance(sa.p0, sa.p1, sb.p0, sb.p1) >= 24.0) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      ++out.resamples;
      continue;
    }
    auto seg_meta = [](const LineSegment& seg) {
      Json j;
      j["p0"] = point_json(seg.p0);
      j["p1"] = point_json(seg.p1);
      j["color"] = std::string(color_name(seg.color));
      j["letter"] = *seg.label;
      return j;
    };
    out.scene.elements = {sa, sb};
    out.meta["segments"] = Json::array({seg_meta(sa), seg_meta(sb)});
    return out;
  }
}

BuiltPair build_distance(int cls, RandomStream& s, const Margins& m,
                         const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  BuiltPair out;
  for (;;) {
    const double r_a = s.uniform(0.030 * mm, 0.052 * mm);
    const double r_b = s.uniform(0.030 * mm, 0.052 * mm);
    double dist_a, dist_b;
    const double d_min = 2 * std::max(r_a, r_b) + 10;
    const double d_max = 0.40 * mm;
    if (cls == 2) {
      dist_a = dist_b = s.uniform(d_min, d_max);
    } else {
      const double lo = s.uniform(d_min, d_max / m.distance_ratio);
      const double hi = lo * s.uniform(m.distance_ratio, 1.6);
      if (hi > d_max) continue;
      dist_a = cls == 0 ? hi : lo;
      dist_b = cls == 0 ? lo : hi;
    }
    const auto [ca, cb] = two_colors(s);
    auto sample_pair = [&](double dist, double radius, ColorName color,
                           double y_lo, double y_hi) -> std::optional<CirclePair> {
      const double theta = s.uniform(0.0, 180.0);
      const Point2 d = geom::unit_dir(theta);
      const double ex = std::fabs(d.x) * dist / 2 + radius + 6;
      const double ey = std::fabs(d.y) * dist / 2 + radius + 6;
      if (y_hi - ey <= y_lo + ey || w - ex <= ex) return std::nullopt;
      const Point2 mid{s.uniform(ex, w - ex), s.uniform(y_lo + ey, y_hi - ey)};
      return CirclePair{mid - d * (dist / 2), mid + d * (dist / 2), radius,
                        color};
    };
    const auto pa = sample_pair(dist_a, r_a, ca, 0.0, h / 2);
    const auto pb = sample_pair(dist_b, r_b, cb, h / 2, h);
    if (!pa || !pb) {
      ++out.resamples;
      continue;
    }
    auto pair_meta = [](const CirclePair& p) {
      Json j;
      j["a_center"] = point_json(p.a_center);
      j["b_center"] = point_json(p.b_center);
      j["radius"] = p.radius;
      j["color"] = std::string(color_name(p.color));
      return j;
    };
    out.scene.elements = {*pa, *pb};
    out.meta["pairs"] = Json::array({pair_meta(*pa), pair_meta(*pb)});
    return out;
  }
}

BuiltPair build_quantity(int cls, RandomStream& s, const Margins& m,
                         const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  BuiltPair out;
  for (;;) {
    int count_a, count_b;
    if (cls == 2) {
      count_a = count_b = static_cast<int>(s.uniform_int(2, 9));
    } else {
      const int hi = static_cast<int>(s.uniform_int(3, 9));
      const int lo = static_cast<int>(s.uniform_int(2, hi - 1));
      count_a = cls == 0 ? hi : lo;
      count_b = cls == 0 ? lo : hi;
    }
    const auto [ca, cb] = two_colors(s);
    const auto kind_a =
        static_cast<geom::ShapeKind>(s.uniform_int(0, 4));
    const auto kind_b =
        static_cast<geom::ShapeKind>(s.uniform_int(0, 4));
    const double size_a = s.uniform(0.028 * mm, 0.042 * mm);
    const double size_b = s.uniform(0.028 * mm, 0.042 * mm);

    std::vector<ShapeInstance> placed;
    bool ok = true;
    auto place_group = [&](int count, geom::ShapeKind kind, ColorName color,
                           double size) {
      for (int i = 0; i < count; ++i) {
        bool found = false;
        for (int tries = 0; tries < kPlacementTries; ++tries) {
          ShapeInstance cand{kind, color,
                             {s.uniform(size + 6, w - size - 6),
                              s.uniform(size + 6, h - size - 6)},
                             size};
          bool clear = true;
          for (const ShapeInstance& other : placed) {
            if (geom::distance(cand.center, other.center) <
                cand.size + other.size + m.shape_gap) {
              clear = false;
              break;
            }
          }
          if (clear) {
            placed.push_back(cand);
            found = true;
            break;
          }
        }
        if (!found) return false;
      }
      return true;
    };
    ok = place_group(count_a, kind_a, ca, size_a) &&
         place_group(count_b, kind_b, cb, size_b);
    if (!ok) {
      ++out.resamples;
      continue;
    }
    auto group_meta = [&](ColorName color, geom::ShapeKind kind, double size,
                          int from, int count) {
      Json j;
      j["color"] = std::string(color_name(color));
      j["shape"] = std::string(geom::shape_kind_name(kind));
      j["size"] = size;
      j["count"] = count;
      Json centers = Json::array();
      for (int i = from; i < from + count; ++i)
        centers.push_back(point_json(placed[static_cast<size_t>(i)].center));
      j["centers"] = centers;
      return j;
    };
    out.scene.elements.assign(placed.begin(), placed.end());
    out.meta["groups"] = Json::array(
        {group_meta(ca, kind_a, size_a, 0, count_a),
         group_meta(cb, kind_b, size_b, count_a, count_b)});
    return out;
  }
}

Solid sample_solid(geom::SolidKind kind, RandomStream& s, double mm) {
  Solid solid;
  solid.kind = kind;
  switch (kind) {
    case geom::SolidKind::cube:
      solid.dims = {s.uniform(0.115 * mm, 0.23 * mm)};
      break;
    case geom::SolidKind::sphere:
      solid.dims = {s.uniform(0.075 * mm, 0.145 * mm)};
      break;
    case geom::SolidKind::cylinder:
      solid.dims = {s.uniform(0.06 * mm, 0.115 * mm),
                    s.uniform(0.115 * mm, 0.26 * mm)};
      break;
  }
  return solid;
}

// Dims for `kind` with exactly the given volume; nullopt if outside the
// sampling range.
std::optional<Solid> solve_solid_for_volume(geom::SolidKind kind, double volume,
                                            RandomStream& s, double mm) {
  Solid solid;
  solid.kind = kind;
  switch (kind) {
    case geom::SolidKind::cube: {
      const double e = std::cbrt(volume);
      if (e < 0.115 * mm || e > 0.23 * mm) return std::nullopt;
      solid.dims = {e};
      return solid;
    }
    case geom::SolidKind::sphere: {
      const double r = std::cbrt(volume * 3.0 / (4.0 * std::numbers::pi));
      if (r < 0.075 * mm || r > 0.145 * mm) return std::nullopt;
      solid.dims = {r};
      return solid;
    }
    case geom::SolidKind::cylinder: {
      for (int tries = 0; tries < 20; ++tries) {
        const double r = s.uniform(0.06 * mm, 0.115 * mm);
        const double h_dim = volume / (std::numbers::pi * r * r);
        if (h_dim >= 0.115 * mm && h_dim <= 0.26 * mm) {
          solid.dims = {r, h_dim};
          return solid;
        }
      }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

BuiltPair build_volume(int cls, RandomStream& s, const Margins& m,
                       const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  BuiltPair out;
  for (;;) {
    Solid sa, sb;
    if (cls == 2) {
      // Same volume, distinct kinds (equal dims would be trivial).
      const int combo = static_cast<int>(s.uniform_int(0, 2));
      const geom::SolidKind first = combo == 0   ? geom::SolidKind::cube
                                    : combo == 1 ? geom::SolidKind::cube
                                                 : geom::SolidKind::sphere;
      const geom::SolidKind second = combo == 0   ? geom::SolidKind::sphere
                                     : combo == 1 ? geom::SolidKind::cylinder
                                                  : geom::SolidKind::cylinder;
      sa = sample_solid(first, s, mm);
      const auto solved =
          solve_solid_for_volume(second, geom::solid_volume(sa), s, mm);
      if (!solved) {
        ++out.resamples;
        continue;
      }
      sb = *solved;
      if (s.bernoulli(0.5)) std::swap(sa, sb);
    } else {
      sa = sample_solid(static_cast<geom::SolidKind>(s.uniform_int(0, 2)), s, mm);
      sb = sample_solid(static_cast<geom::SolidKind>(s.uniform_int(0, 2)), s, mm);
      const double va = geom::solid_volume(sa);
      const double vb = geom::solid_volume(sb);
      const double big = std::max(va, vb), small = std::min(va, vb);
      if (big / small < m.volume_ratio) {
        ++out.resamples;
        continue;
      }
      if ((cls == 0) != (va > vb)) std::swap(sa, sb);
    }
    const auto [ca, cb] = two_colors(s);
    sa.color = ca;
    sb.color = cb;

    const Point2 anchor_a{s.uniform(0.20 * w, 0.32 * w), s.uniform(0.42 * h, 0.60 * h)};
    const Point2 anchor_b{s.uniform(0.68 * w, 0.80 * w), s.uniform(0.42 * h, 0.60 * h)};
    const Point2 ext_a = render::solid_visual_extent(sa);
    const Point2 ext_b = render::solid_visual_extent(sb);
    auto fits = [&](const Point2& c, const Point2& ext) {
      return c.x - ext.x >= 6 && c.x + ext.x <= w - 6 && c.y - ext.y >= 6 &&
             c.y + ext.y <= h - 6;
    };
    if (!fits(anchor_a, ext_a) || !fits(anchor_b, ext_b)) {
      ++out.resamples;
      continue;
    }
    auto solid_meta = [](const Solid& solid, Point2 center) {
      Json j;
      j["kind"] = std::string(geom::solid_kind_name(solid.kind));
      j["dims"] = solid.dims;
      j["color"] = std::string(color_name(solid.color));
      j["center"] = point_json(center);
      return j;
    };
    out.scene.elements = {SolidGlyph{sa, anchor_a}, SolidGlyph{sb, anchor_b}};
    out.meta["solids"] =
        Json::array({solid_meta(sa, anchor_a), solid_meta(sb, anchor_b)});
    return out;
  }
}

BuiltPair build_position(int cls, RandomStream& s, const Margins& m,
                         const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  const auto rel = static_cast<geom::RelPosition>(cls);
  BuiltPair out;
  for (;;) {
    const double size_a = s.uniform(0.045 * mm, 0.075 * mm);
    const double size_b = s.uniform(0.045 * mm, 0.075 * mm);
    const auto [ca, cb] = two_colors(s);
    const auto kind_a = static_cast<geom::ShapeKind>(s.uniform_int(0, 4));
    const auto kind_b = static_cast<geom::ShapeKind>(s.uniform_int(0, 4));

    const bool horizontal = rel == geom::RelPosition::left_of ||
                            rel == geom::RelPosition::right_of;
    const double span = horizontal ? w : h;
    const double gap_min =
        std::max(m.position_axis_gap, size_a + size_b + m.shape_gap + 4);
    const double dom = s.uniform(gap_min, 0.55 * span);
    const double oth_max = std::max(0.0, dom - 20.0);
    const double oth = s.uniform(-oth_max, oth_max);

    // Vector from A to B along the dominant axis.
    Point2 a_to_b{};
    switch (rel) {
      case geom::RelPosition::left_of:  a_to_b = {dom, oth}; break;
      case geom::RelPosition::right_of: a_to_b = {-dom, oth}; break;
      case geom::RelPosition::above:    a_to_b = {oth, dom}; break;
      case geom::RelPosition::below:    a_to_b = {oth, -dom}; break;
    }
    const double pad_a_x = size_a + 6, pad_a_y = size_a + 6;
    const double lo_x = std::max(pad_a_x, pad_a_x - a_to_b.x);
    const double hi_x = std::min(w - pad_a_x, w - (size_b + 6) - a_to_b.x);
    const double lo_y = std::max(pad_a_y, pad_a_y - a_to_b.y);
    const double hi_y = std::min(h - pad_a_y, h - (size_b + 6) - a_to_b.y);
    if (hi_x <= lo_x || hi_y <= lo_y) {
      ++out.resamples;
      continue;
    }
    const ShapeInstance a{kind_a, ca, {s.uniform(lo_x, hi_x), s.uniform(lo_y, hi_y)}, size_a};
    const ShapeInstance b{kind_b, cb, a.center + a_to_b, size_b};
    if (geom::distance(a.center, b.center) < size_a + size_b + m.shape_gap) {
      ++out.resamples;
      continue;
    }
    auto shape_meta = [](const ShapeInstance& sh) {
      Json j;
      j["shape"] = std::string(geom::shape_kind_name(sh.kind));
      j["color"] = std::string(color_name(sh.color));
      j["center"] = point_json(sh.center);
      j["size"] = sh.size;
      return j;
    };
    out.scene.elements = {a, b};
    out.meta["shapes"] = Json::array({shape_meta(a), shape_meta(b)});
    out.meta["relation"] = std::string(geom::rel_position_name(rel));
    return out;
  }
}

BuiltPair build_slope(int cls, RandomStream& s, const Margins& m,
                      const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  const bool match_first = cls == 0 || cls == 2;
  const bool match_second = cls == 1 || cls == 2;
  BuiltPair out;
  for (;;) {
    const double theta_ref = s.uniform(0.0, 180.0);
    auto theta_for = [&](bool match) {
      if (match) return theta_ref;
      const double dev = s.uniform(m.slope_deg, 80.0);
      return theta_ref + (s.bernoulli(0.5) ? dev : -dev);
    };
    const double thetas[3] = {theta_ref, theta_for(match_first),
                              theta_for(match_second)};
    const auto [ca, cb] = two_colors(s);
    const ColorName colors[3] = {ColorName::black, ca, cb};

    std::vector<LineSegment> segs;
    bool ok = true;
    for (int i = 0; i < 3 && ok; ++i) {
      const double len = s.uniform(0.16 * mm, 0.38 * mm);
      const Point2 d = geom::unit_dir(thetas[i]);
      const double ex = std::fabs(d.x) * len / 2 + 8;
      const double ey = std::fabs(d.y) * len / 2 + 8;
      bool found = false;
      for (int tries = 0; tries < kPlacementTries; ++tries) {
        const Point2 mid{s.uniform(ex, w - ex), s.uniform(ey, h - ey)};
        LineSegment cand{mid - d * (len / 2), mid + d * (len / 2), colors[i], {}};
        bool clear = true;
        for (const LineSegment& other : segs) {
          if (geom::segment_segment_distance(cand.p0, cand.p1, other.p0,
                                             other.p1) < 14.0) {
            clear = false;
            break;
          }
        }
        if (clear) {
          segs.push_back(cand);
          found = true;
          break;
        }
      }
      ok = found;
    }
    if (!ok) {
      ++out.resamples;
      continue;
    }
    auto seg_meta = [](const LineSegment& seg) {
      Json j;
      j["p0"] = point_json(seg.p0);
      j["p1"] = point_json(seg.p1);
      j["color"] = std::string(color_name(seg.color));
      return j;
    };
    out.scene.elements.assign(segs.begin(), segs.end());
    out.meta["reference"] = seg_meta(segs[0]);
    out.meta["lines"] = Json::array({seg_meta(segs[1]), seg_meta(segs[2])});
    return out;
  }
}

BuiltPair build_intersection(int cls, RandomStream& s, const Margins& m,
                             const render::CanvasSpec& canvas) {
  const double w = canvas.width, h = canvas.height;
  const double mm = std::min(w, h);
  BuiltPair out;
  for (;;) {
    ShapeInstance shape;
    shape.kind = static_cast<geom::ShapeKind>(s.uniform_int(0, 4));
    shape.color = kObjectColors[static_cast<size_t>(
        s.uniform_int(0, kObjectColors.size() - 1))];
    shape.size = s.uniform(0.085 * mm, 0.14 * mm);
    shape.center = {s.uniform(0.30 * w, 0.70 * w), s.uniform(0.30 * h, 0.70 * h)};
    const double clearance = geom::center_clearance(shape);
    if (clearance < m.intersect_clearance + 3.0) {
      ++out.resamples;
      continue;
    }

    LineSegment seg;
    seg.color = ColorName::black;
    bool ok = false;
    if (cls == 0) {
      // A chord passing well inside: its nearest point to the shape center
      // lies at offset o, so interior depth is at least clearance - |o|.
      const double o_max = clearance - m.intersect_clearance;
      for (int tries = 0; tries < kPlacementTries; ++tries) {
        const double theta = s.uniform(0.0, 180.0);
        const Point2 d = geom::unit_dir(theta);
        const Point2 n{-d.y, d.x};
        const double offset = s.uniform(-o_max, o_max);
        const Point2 anchor = shape.center + n * offset;
        const double half = shape.size + s.uniform(0.06 * mm, 0.20 * mm);
        seg.p0 = anchor - d * half;
        seg.p1 = anchor + d * half;
        if (seg.p0.x < 4 || seg.p0.x > w - 4 || seg.p0.y < 4 ||
            seg.p0.y > h - 4 || seg.p1.x < 4 || seg.p1.x > w - 4 ||
            seg.p1.y < 4 || seg.p1.y > h - 4)
          continue;
        if (!geom::intersects(seg, shape)) continue;
        ok = true;
        break;
      }
    } else {
      for (int tries = 0; tries < kPlacementTries; ++tries) {
        const double len = s.uniform(0.16 * mm, 0.42 * mm);
        const double theta = s.uniform(0.0, 180.0);
        const Point2 d = geom::unit_dir(theta);
        const double ex = std::fabs(d.x) * len / 2 + 6;
        const double ey = std::fabs(d.y) * len / 2 + 6;
        const Point2 mid{s.uniform(ex, w - ex), s.uniform(ey, h - ey)};
        seg.p0 = mid - d * (len / 2);
        seg.p1 = mid + d * (len / 2);
        if (geom::intersects(seg, shape)) continue;
        if (geom::segment_outline_distance(seg, shape) <
            m.intersect_clearance)
          continue;
        ok = true;
        break;
      }
    }
    if (!ok) {
      ++out.resamples;
      continue;
    }
    Json seg_meta;
    seg_meta["p0"] = point_json(seg.p0);
    seg_meta["p1"] = point_json(seg.p1);
    seg_meta["color"] = std::string(color_name(seg.color));
    Json shape_meta;
    shape_meta["shape"] = std::string(geom::shape_kind_name(shape.kind));
    shape_meta["color"] = std::string(color_name(shape.color));
    shape_meta["center"] = point_json(shape.center);
    shape_meta["size"] = shape.size;

    out.scene.elements = {shape, seg};
    out.meta["segment"] = seg_meta;
    out.meta["shape"] = shape_meta;
    out.meta["intersects"] = cls == 0;
    return out;
  }
}

}  // namespace

int outcome_class_count(Task t) {
  switch (t) {
    case Task::angle:
    case Task::length:
    case Task::distance:
    case Task::quantity:
    case Task::volume:       return 3;
    case Task::position:     return 4;
    case Task::slope:        return 4;
    case Task::intersection: return 2;
  }
  return 3;
}

std::string_view outcome_name(Task t, int cls) {
  switch (t) {
    case Task::angle:
    case Task::length:
    case Task::distance:
    case Task::quantity:
    case Task::volume:
      return cls == 0 ? "first" : cls == 1 ? "second" : "same";
    case Task::position:
      return geom::rel_position_name(static_cast<geom::RelPosition>(cls));
    case Task::slope:
      return cls == 0   ? "only_first"
             : cls == 1 ? "only_second"
             : cls == 2 ? "both"
                        : "neither";
    case Task::intersection:
      return cls == 0 ? "intersecting" : "clear";
  }
  return "same";
}

std::string outcome_from_meta(Task t, const Json& meta) {
  auto three_way = [](double a, double b) {
    if (nearly_equal(a, b)) return std::string("same");
    return std::string(a > b ? "first" : "second");
  };
  switch (t) {
    case Task::angle:
      return three_way(meta.at("wedges").at(0).at("sweep_deg").get<double>(),
                       meta.at("wedges").at(1).at("sweep_deg").get<double>());
    case Task::length: {
      auto len = [&](int i) {
        const Json& seg = meta.at("segments").at(i);
        const Point2 p0{seg.at("p0").at(0).get<double>(),
                        seg.at("p0").at(1).get<double>()};
        const Point2 p1{seg.at("p1").at(0).get<double>(),
                        seg.at("p1").at(1).get<double>()};
        return geom::distance(p0, p1);
      };
      return three_way(len(0), len(1));
    }
    case Task::distance: {
      auto dist = [&](int i) {
        const Json& p = meta.at("pairs").at(i);
        const Point2 a{p.at("a_center").at(0).get<double>(),
                       p.at("a_center").at(1).get<double>()};
        const Point2 b{p.at("b_center").at(0).get<double>(),
                       p.at("b_center").at(1).get<double>()};
        return geom::distance(a, b);
      };
      return three_way(dist(0), dist(1));
    }
    case Task::quantity:
      return three_way(
          static_cast<double>(meta.at("groups").at(0).at("centers").size()),
          static_cast<double>(meta.at("groups").at(1).at("centers").size()));
    case Task::volume: {
      auto vol = [&](int i) {
        const Json& sj = meta.at("solids").at(i);
        Solid solid;
        solid.kind = geom::parse_solid_kind(sj.at("kind").get<std::string>());
        solid.dims = sj.at("dims").get<std::vector<double>>();
        return geom::solid_volume(solid);
      };
      return three_way(vol(0), vol(1));
    }
    case Task::position: {
      auto shape = [&](int i) {
        const Json& sj = meta.at("shapes").at(i);
        ShapeInstance sh;
        sh.center = {sj.at("center").at(0).get<double>(),
                     sj.at("center").at(1).get<double>()};
        return sh;
      };
      return std::string(geom::rel_position_name(
          geom::relative_position(shape(0), shape(1))));
    }
    case Task::slope: {
      auto orient = [&](const Json& seg) {
        const Point2 p0{seg.at("p0").at(0).get<double>(),
                        seg.at("p0").at(1).get<double>()};
        const Point2 p1{seg.at("p1").at(0).get<double>(),
                        seg.at("p1").at(1).get<double>()};
        return geom::orientation_deg({p0, p1, ColorName::black, {}});
      };
      const double ref = orient(meta.at("reference"));
      auto gap = [&](double a) {
        double d = std::fabs(a - ref);
        d = std::fmod(d, 180.0);
        return std::min(d, 180.0 - d);
      };
      const bool m0 = gap(orient(meta.at("lines").at(0))) <= 1e-7;
      const bool m1 = gap(orient(meta.at("lines").at(1))) <= 1e-7;
      if (m0 && m1) return "both";
      if (!m0 && !m1) return "neither";
      return m0 ? "only_first" : "only_second";
    }
    case Task::intersection: {
      const Json& seg = meta.at("segment");
      const Json& sj = meta.at("shape");
      LineSegment line{{seg.at("p0").at(0).get<double>(),
                        seg.at("p0").at(1).get<double>()},
                       {seg.at("p1").at(0).get<double>(),
                        seg.at("p1").at(1).get<double>()},
                       ColorName::black,
                       {}};
      ShapeInstance shape;
      shape.kind = geom::parse_shape_kind(sj.at("shape").get<std::string>());
      shape.center = {sj.at("center").at(0).get<double>(),
                      sj.at("center").at(1).get<double>()};
      shape.size = sj.at("size").get<double>();
      return geom::intersects(line, shape) ? "intersecting" : "clear";
    }
  }
  throw DomainError("unknown preference task");
}

BuiltPair build_pref_instance(Task t, int outcome_class, RandomStream& stream,
                              const Margins& margins,
                              const render::CanvasSpec& canvas) {
  if (std::min(canvas.width, canvas.height) < 192)
    throw ConfigError("dataset generation requires a canvas of at least 192");
  if (outcome_class < 0 || outcome_class >= outcome_class_count(t))
    throw DomainError("bad outcome class");
  switch (t) {
    case Task::angle:        return build_angle(outcome_class, stream, margins, canvas);
    case Task::length:       return build_length(outcome_class, stream, margins, canvas);
    case Task::distance:     return build_distance(outcome_class, stream, margins, canvas);
    case Task::quantity:     return build_quantity(outcome_class, stream, margins, canvas);
    case Task::volume:       return build_volume(outcome_class, stream, margins, canvas);
    case Task::position:     return build_position(outcome_class, stream, margins, canvas);
    case Task::slope:        return build_slope(outcome_class, stream, margins, canvas);
    case Task::intersection: return build_intersection(outcome_class, stream, margins, canvas);
  }
  throw DomainError("unknown preference task");
}

namespace {

const TemplateRow& row_of(Task t, int row) {
  for (const TemplateRow& r : templates_for(t)) {
    if (r.row == row) return r;
  }
  throw DomainError("no such template row");
}

struct Option {
  int row;
  Bindings bindings;
};

std::string render_option(Task t, const Option& opt) {
  return instantiate(row_of(t, opt.row), opt.bindings);
}

const Option& pick(std::vector<Option>& options, RandomStream& s) {
  return options[static_cast<size_t>(
      s.uniform_int(0, static_cast<int64_t>(options.size()) - 1))];
}

}  // namespace

RealizedPair realize_templates(Task t, const Json& meta, RandomStream& stream) {
  const auto prompts = prompts_for(t);
  RealizedPair out;
  out.prompt = std::string(prompts[static_cast<size_t>(
      stream.uniform_int(0, static_cast<int64_t>(prompts.size()) - 1))]);

  const std::string outcome = outcome_from_meta(t, meta);
  std::vector<Option> truthy;
  std::vector<Option> wrong_binding;
  std::vector<Option> opposite;

  auto entity_color = [&](const char* array, int i) {
    return meta.at(array).at(i).at("color").get<std::string>();
  };

  switch (t) {
    case Task::angle:
    case Task::length: {
      const char* array = t == Task::angle ? "wedges" : "segments";
      const std::string c0 = entity_color(array, 0);
      const std::string c1 = entity_color(array, 1);
      const std::string l0 = meta.at(array).at(0).at("letter").get<std::string>();
      const std::string l1 = meta.at(array).at(1).at("letter").get<std::string>();
      if (outcome == "same") {
        truthy = {{5, {}}};
        for (int row : {1, 3}) {
          wrong_binding.push_back({row, {{"COLOR", c0}}});
          wrong_binding.push_back({row, {{"COLOR", c1}}});
        }
        for (int row : {2, 4}) {
          wrong_binding.push_back({row, {{"X", l0}}});
          wrong_binding.push_back({row, {{"X", l1}}});
        }
        opposite = wrong_binding;
      } else {
        const bool first = outcome == "first";
        const std::string& win_c = first ? c0 : c1;
        const std::string& win_l = first ? l0 : l1;
        const std::string& lose_c = first ? c1 : c0;
        const std::string& lose_l = first ? l1 : l0;
        truthy = {{1, {{"COLOR", win_c}}},
                  {2, {{"X", win_l}}},
                  {3, {{"COLOR", lose_c}}},
                  {4, {{"X", lose_l}}}};
        wrong_binding = {{1, {{"COLOR", lose_c}}},
                         {2, {{"X", lose_l}}},
                         {3, {{"COLOR", win_c}}},
                         {4, {{"X", win_l}}}};
        opposite = {{5, {}}};
      }
      break;
    }
    case Task::distance: {
      const std::string c0 = entity_color("pairs", 0);
      const std::string c1 = entity_color("pairs", 1);
      if (outcome == "same") {
        truthy = {{3, {}}};
        for (int row : {1, 2}) {
          wrong_binding.push_back({row, {{"COLOR", c0}}});
          wrong_binding.push_back({row, {{"COLOR", c1}}});
        }
        opposite = wrong_binding;
      } else {
        const bool first = outcome == "first";
        const std::string& far_c = first ? c0 : c1;
        const std::string& near_c = first ? c1 : c0;
        truthy = {{1, {{"COLOR", far_c}}}, {2, {{"COLOR", near_c}}}};
        wrong_binding = {{1, {{"COLOR", near_c}}}, {2, {{"COLOR", far_c}}}};
        opposite = {{3, {}}};
      }
      break;
    }
    case Task::quantity:
    case Task::volume: {
      const char* array = t == Task::quantity ? "groups" : "solids";
      const char* shape_key = t == Task::quantity ? "shape" : "kind";
      const std::string c0 = entity_color(array, 0);
      const std::string c1 = entity_color(array, 1);
      const std::string k0 = meta.at(array).at(0).at(shape_key).get<std::string>();
      const std::string k1 = meta.at(array).at(1).at(shape_key).get<std::string>();
      const Bindings ent0 = {{"COLOR", c0}, {"SHAPE", k0}};
      const Bindings ent1 = {{"COLOR", c1}, {"SHAPE", k1}};
      Bindings both = {{"COLOR-A", c0}, {"SHAPE-A", k0},
                       {"COLOR-B", c1}, {"SHAPE-B", k1}};
      if (stream.bernoulli(0.5)) {
        both = {{"COLOR-A", c1}, {"SHAPE-A", k1},
                {"COLOR-B", c0}, {"SHAPE-B", k0}};
      }
      if (outcome == "same") {
        truthy = {{3, t == Task::quantity ? both : Bindings{}}};
        wrong_binding = {{1, ent0}, {1, ent1}, {2, ent0}, {2, ent1}};
        opposite = wrong_binding;
      } else {
        const bool first = outcome == "first";
        truthy = {{1, first ? ent0 : ent1}, {2, first ? ent1 : ent0}};
        wrong_binding = {{1, first ? ent1 : ent0}, {2, first ? ent0 : ent1}};
        opposite = {{3, t == Task::quantity ? both : Bindings{}}};
      }
      break;
    }
    case Task::position: {
      const std::string c0 = entity_color("shapes", 0);
      const std::string c1 = entity_color("shapes", 1);
      const std::string k0 = meta.at("shapes").at(0).at("shape").get<std::string>();
      const std::string k1 = meta.at("shapes").at(1).at("shape").get<std::string>();
      const std::string rel_name = meta.at("relation").get<std::string>();
      geom::RelPosition relation = geom::RelPosition::left_of;
      for (auto p : {geom::RelPosition::left_of, geom::RelPosition::right_of,
                     geom::RelPosition::above, geom::RelPosition::below}) {
        if (geom::rel_position_name(p) == rel_name) relation = p;
      }
      const Bindings fwd = {{"COLOR-A", c0}, {"SHAPE-A", k0},
                            {"COLOR-B", c1}, {"SHAPE-B", k1},
                            {"POSITION", std::string(position_phrase(relation))}};
      const Bindings rev = {{"COLOR-A", c1}, {"SHAPE-A", k1},
                            {"COLOR-B", c0}, {"SHAPE-B", k0},
                            {"POSITION",
                             std::string(position_phrase(geom::opposite(relation)))}};
      truthy = {{1, fwd}, {1, rev}};
      wrong_binding = {{3,
                        {{"COLOR-A", c0}, {"SHAPE-A", k0},
                         {"COLOR-B", c1}, {"SHAPE-B", k1},
                         {"WRONG-POSITION",
                          std::string(position_phrase(geom::opposite(relation)))}}}};
      opposite = {{2, {}}};
      break;
    }
    case Task::slope: {
      const std::string c0 = entity_color("lines", 0);
      const std::string c1 = entity_color("lines", 1);
      if (outcome == "both") {
        truthy = {{2, {}}, {1, {{"COLOR", c0}}}, {1, {{"COLOR", c1}}}};
        wrong_binding = {{3, {}}};
        opposite = {{3, {}}};
      } else if (outcome == "neither") {
        truthy = {{3, {}}};
        wrong_binding = {{1, {{"COLOR", c0}}}, {1, {{"COLOR", c1}}}};
        opposite = {{2, {}}};
      } else {
        const bool first = outcome == "only_first";
        truthy = {{1, {{"COLOR", first ? c0 : c1}}}};
        wrong_binding = {{1, {{"COLOR", first ? c1 : c0}}}};
        opposite = {{2, {}}, {3, {}}};
      }
      break;
    }
    case Task::intersection: {
      const Bindings ent = {
          {"COLOR", meta.at("shape").at("color").get<std::string>()},
          {"SHAPE", meta.at("shape").at("shape").get<std::string>()}};
      const bool hit = meta.at("intersects").get<bool>();
      truthy = {{hit ? 1 : 2, ent}};
      wrong_binding = {{hit ? 2 : 1, ent}};
      opposite = wrong_binding;
      break;
    }
  }

  out.chosen = render_option(t, pick(truthy, stream));
  std::vector<Option>* negatives =
      stream.bernoulli(0.5) ? &wrong_binding : &opposite;
  if (negatives->empty())
    negatives = !wrong_binding.empty() ? &wrong_binding : &opposite;
  out.rejected = render_option(t, pick(*negatives, stream));

  // Generation-time oracle: chosen must be entailed by meta, rejected must
  // contradict it. A failure here is a generator bug, not bad data.
  const auto chosen_claim = match_statement(t, out.chosen);
  const auto rejected_claim = match_statement(t, out.rejected);
  if (!chosen_claim || !claim_truth(*chosen_claim, meta))
    throw DomainError("generator bug: chosen response is not true");
  if (!rejected_claim || claim_truth(*rejected_claim, meta))
    throw DomainError("generator bug: rejected response is not false");
  if (out.chosen == out.rejected)
    throw DomainError("generator bug: chosen equals rejected");
  return out;
}

std::vector<PreferencePair> paraphrase_expand(const PreferencePair& base,
                                              ParaphraseClient* client,
                                              const ParaphraseConfig& cfg,
                                              uint64_t master_seed,
                                              uint64_t pair_index) {
  std::vector<PreferencePair> out;
  out.push_back(base);
  if (cfg.k <= 0 || cfg.mode == "off") return out;

  const Task task = parse_task(base.task);
  for (int v = 0; v < cfg.k; ++v) {
    PreferencePair variant = base;
    variant.id = base.id + "-p" + std::to_string(v + 1);
    bool from_client = false;
    if (client) {
      const auto prompt = client->paraphrase(base.prompt, 1);
      const auto chosen = client->paraphrase(base.chosen, 1);
      const auto rejected = client->paraphrase(base.rejected, 1);
      if (prompt && chosen && rejected) {
        variant.prompt = prompt->at(0);
        variant.chosen = chosen->at(0);
        variant.rejected = rejected->at(0);
        from_client = true;
      }
    }
    if (!from_client) {
      if (!cfg.fallback) {
        // Surface the error for this pair; the base pair ships unexpanded.
        log_error("paraphrase.client_failed",
                  {{"id", base.id}, {"fallback", false}});
        out.front().provenance["paraphrase_error"] =
            "client unavailable and fallback disabled";
        return out;
      }
      RandomStream stream = derive_stream(
          master_seed, {task_stream_id(task), 100 + static_cast<uint64_t>(v),
                        pair_index});
      variant.prompt = fallback_rewrite(base.prompt, stream);
      variant.chosen = fallback_rewrite(base.chosen, stream);
      variant.rejected = fallback_rewrite(base.rejected, stream);
    }
    variant.provenance = Json::object();
    variant.provenance["origin"] = from_client ? "client" : "fallback";
    variant.provenance["base_id"] = base.id;
    out.push_back(std::move(variant));
  }
  return out;
}

PrefGenReport generate_preference_dataset(const RunConfig& cfg,
                                          const fs::path& out_root,
                                          ParaphraseClient* client) {
  if (cfg.cogalign_n_total <= 0 || cfg.cogalign_n_total % 8 != 0)
    throw ConfigError("cogalign.n_total must be a positive multiple of 8");
  const int per_task = cfg.cogalign_n_total / 8;
  const int k_variants =
      cfg.paraphrase.mode == "off" ? 0 : std::max(0, cfg.paraphrase.k);
  const int stride = 1 + k_variants;

  std::error_code ec;
  for (Task t : kAllTasks) {
    fs::create_directories(out_root / "images" / std::string(task_name(t)), ec);
    if (ec) throw IoError("cannot create output dirs: " + ec.message());
  }

  std::vector<Json> lines(static_cast<size_t>(cfg.cogalign_n_total) *
                          static_cast<size_t>(stride));
  std::atomic<int> resamples{0};
  std::atomic<int> paraphrase_failures{0};
  std::counting_semaphore<256> inflight(
      std::max(1, cfg.paraphrase.max_inflight));

  parallel_for(static_cast<size_t>(cfg.cogalign_n_total), cfg.jobs,
               [&](size_t g) {
    const Task task = kAllTasks[g / static_cast<size_t>(per_task)];
    const int index = static_cast<int>(g % static_cast<size_t>(per_task));
    RandomStream stream = derive_stream(
        cfg.master_seed,
        {task_stream_id(task), 0, static_cast<uint64_t>(index)});
    const int cls = index % outcome_class_count(task);
    BuiltPair built =
        build_pref_instance(task, cls, stream, cfg.margins, cfg.canvas);
    if (built.resamples > 0) resamples += built.resamples;
    const RealizedPair realized = realize_templates(task, built.meta, stream);

    const std::string file = pad6(index) + ".png";
    const std::string rel =
        "images/" + std::string(task_name(task)) + "/" + file;
    render::write_binary_file(
        out_root / "images" / std::string(task_name(task)) / file,
        render::render_png(built.scene, cfg.canvas));

    PreferencePair base;
    base.id = std::string(task_name(task)) + "-" + pad6(index);
    base.task = std::string(task_name(task));
    base.image = rel;
    base.prompt = realized.prompt;
    base.chosen = realized.chosen;
    base.rejected = realized.rejected;
    base.meta = std::move(built.meta);
    base.provenance = Json::object();
    base.provenance["origin"] = "base";

    std::vector<PreferencePair> records;
    if (stride == 1) {
      records.push_back(std::move(base));
    } else {
      inflight.acquire();
      records = paraphrase_expand(base, client, cfg.paraphrase,
                                  cfg.master_seed, static_cast<uint64_t>(index));
      inflight.release();
      if (static_cast<int>(records.size()) != stride) {
        paraphrase_failures += 1;
      }
    }
    for (size_t v = 0; v < records.size(); ++v) {
      lines[g * static_cast<size_t>(stride) + v] = to_json(records[v]);
    }
  });

  // Drop slots left empty by unexpanded pairs; order is preserved.
  std::vector<Json> emitted;
  emitted.reserve(lines.size());
  for (Json& j : lines) {
    if (!j.is_null()) emitted.push_back(std::move(j));
  }
  write_jsonl(out_root / "manifest.jsonl", emitted);
  write_run_json(out_root, cfg, "gen cogalign");

  PrefGenReport report;
  report.base_pairs = cfg.cogalign_n_total;
  report.emitted_records = static_cast<int>(emitted.size());
  report.resampled_instances = resamples.load();
  report.paraphrase_failures = paraphrase_failures.load();
  for (Task t : kAllTasks) report.per_task[std::string(task_name(t))] = 0;
  for (const Json& j : emitted) {
    if (j.at("provenance").at("origin").get<std::string>() != "base") continue;
    const std::string task = j.at("task").get<std::string>();
    report.per_task[task] += 1;
    const std::string outcome =
        outcome_from_meta(parse_task(task), j.at("meta"));
    report.outcome_histogram[task][outcome] += 1;
  }
  report.dir = out_root;
  report.manifest_path = out_root / "manifest.jsonl";
  log_info("gen.cogalign.done",
           {{"base_pairs", report.base_pairs},
            {"emitted_records", report.emitted_records},
            {"resampled", report.resampled_instances},
            {"paraphrase_failures", report.paraphrase_failures}});
  return report;
}

PrefVerifyReport verify_pairs(const std::vector<Json>& manifest_lines) {
  PrefVerifyReport report;
  for (const Json& line : manifest_lines) {
    const PreferencePair pair = preference_pair_from_json(line);
    const Task task = parse_task(pair.task);
    const std::string origin =
        pair.provenance.contains("origin")
            ? pair.provenance.at("origin").get<std::string>()
            : "base";

    const std::string chosen = normalize_statement(pair.chosen);
    const std::string rejected = normalize_statement(pair.rejected);
    const auto chosen_claim = match_statement(task, chosen);
    const auto rejected_claim = match_statement(task, rejected);
    if (!chosen_claim || !rejected_claim) {
      if (origin == "client") {
        ++report.skipped_unverifiable;
      } else {
        report.disagree.push_back(
            {pair.id, "statement does not match any template"});
      }
      continue;
    }
    if (pair.chosen == pair.rejected) {
      report.disagree.push_back({pair.id, "chosen equals rejected"});
      continue;
    }
    bool chosen_true = false, rejected_true = true;
    try {
      chosen_true = claim_truth(*chosen_claim, pair.meta);
      rejected_true = claim_truth(*rejected_claim, pair.meta);
    } catch (const Error& e) {
      report.disagree.push_back({pair.id, e.what()});
      continue;
    }
    if (!chosen_true) {
      report.disagree.push_back({pair.id, "chosen evaluates false"});
    } else if (rejected_true) {
      report.disagree.push_back({pair.id, "rejected evaluates true"});
    } else {
      ++report.agree;
    }
  }
  return report;
}

}  // namespace cogalign::pref
