// Supersampled coverage rasterizer. Each draw op is reduced to analytic
// regions (capsules, discs, annuli, ellipses, polygons); pixels are
// classified against the region with a conservative band so only boundary
// pixels pay for per-subsample tests. Box-filter downsample with
// round-half-up integer math keeps output bytes platform-independent.

#include <algorithm>
#include <cmath>
#include <limits>

#include "cogalign/error.hpp"
#include "cogalign/png_io.hpp"
#include "cogalign/render.hpp"

namespace cogalign::render {

using geom::Point2;

namespace {

double dist_point_segment(double px, double py, Point2 a, Point2 b) {
  const double abx = b.x - a.x, aby = b.y - a.y;
  const double len2 = abx * abx + aby * aby;
  double t = 0.0;
  if (len2 > 0) {
    t = ((px - a.x) * abx + (py - a.y) * aby) / len2;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double dx = px - (a.x + abx * t);
  const double dy = py - (a.y + aby * t);
  return std::sqrt(dx * dx + dy * dy);
}

struct FrameBuffer {
  int w = 0, h = 0, ss = 1;
  int sw = 0, sh = 0;
  std::vector<uint8_t> idx;      // palette index per subsample
  std::vector<Rgb> palette;

  FrameBuffer(const CanvasSpec& canvas)
      : w(canvas.width), h(canvas.height), ss(canvas.supersample),
        sw(canvas.width * canvas.supersample),
        sh(canvas.height * canvas.supersample),
        idx(static_cast<size_t>(sw) * sh, 0) {
    palette.push_back(rgb_of(canvas.background));
  }

  uint8_t color_index(Rgb c) {
    for (size_t i = 0; i < palette.size(); ++i) {
      if (palette[i] == c) return static_cast<uint8_t>(i);
    }
    if (palette.size() >= 255) throw DomainError("scene palette overflow");
    palette.push_back(c);
    return static_cast<uint8_t>(palette.size() - 1);
  }
};

// Radius of the subsample grid around a pixel center: classification must be
// conservative over every subsample position inside the pixel.
double subgrid_radius(int ss) {
  const double r = 0.5 - 0.5 / ss;
  return std::sqrt(2.0) * r + 1e-9;
}

// classify(cx, cy) -> signed interior depth at the pixel center (positive
// inside). inside(x, y) -> exact subsample membership.
template <typename Classify, typename Inside>
void paint_region(FrameBuffer& fb, uint8_t color, double gx0, double gy0,
                  double gx1, double gy1, double pad, Classify&& classify,
                  Inside&& inside) {
  const int px0 = std::max(0, static_cast<int>(std::floor(gx0 - pad)));
  const int py0 = std::max(0, static_cast<int>(std::floor(gy0 - pad)));
  const int px1 = std::min(fb.w - 1, static_cast<int>(std::ceil(gx1 + pad)));
  const int py1 = std::min(fb.h - 1, static_cast<int>(std::ceil(gy1 + pad)));
  const int ss = fb.ss;
  const double rad = subgrid_radius(ss);
  const double inv_ss = 1.0 / ss;

  for (int py = py0; py <= py1; ++py) {
    for (int px = px0; px <= px1; ++px) {
      const double depth = classify(px + 0.5, py + 0.5);
      if (depth < -rad) continue;
      uint8_t* row0 = fb.idx.data() + (static_cast<size_t>(py) * ss) * fb.sw +
                      static_cast<size_t>(px) * ss;
      if (depth > rad) {
        for (int sy = 0; sy < ss; ++sy) {
          uint8_t* row = row0 + static_cast<size_t>(sy) * fb.sw;
          for (int sx = 0; sx < ss; ++sx) row[sx] = color;
        }
        continue;
      }
      for (int sy = 0; sy < ss; ++sy) {
        const double y = py + (sy + 0.5) * inv_ss;
        uint8_t* row = row0 + static_cast<size_t>(sy) * fb.sw;
        for (int sx = 0; sx < ss; ++sx) {
          const double x = px + (sx + 0.5) * inv_ss;
          if (inside(x, y)) row[sx] = color;
        }
      }
    }
  }
}

void paint_capsule(FrameBuffer& fb, uint8_t color, Point2 a, Point2 b,
                   double halfw) {
  paint_region(
      fb, color, std::min(a.x, b.x), std::min(a.y, b.y), std::max(a.x, b.x),
      std::max(a.y, b.y), halfw + 1.0,
      [&](double x, double y) { return halfw - dist_point_segment(x, y, a, b); },
      [&](double x, double y) {
        return dist_point_segment(x, y, a, b) <= halfw;
      });
}

void paint_disc(FrameBuffer& fb, uint8_t color, Point2 c, double r) {
  paint_region(
      fb, color, c.x - r, c.y - r, c.x + r, c.y + r, 1.0,
      [&](double x, double y) {
        const double dx = x - c.x, dy = y - c.y;
        return r - std::sqrt(dx * dx + dy * dy);
      },
      [&](double x, double y) {
        const double dx = x - c.x, dy = y - c.y;
        return dx * dx + dy * dy <= r * r;
      });
}

void paint_annulus(FrameBuffer& fb, uint8_t color, Point2 c, double r,
                   double halfw) {
  paint_region(
      fb, color, c.x - r - halfw, c.y - r - halfw, c.x + r + halfw,
      c.y + r + halfw, 1.0,
      [&](double x, double y) {
        const double dx = x - c.x, dy = y - c.y;
        return halfw - std::fabs(std::sqrt(dx * dx + dy * dy) - r);
      },
      [&](double x, double y) {
        const double dx = x - c.x, dy = y - c.y;
        return std::fabs(std::sqrt(dx * dx + dy * dy) - r) <= halfw;
      });
}

void paint_ellipse(FrameBuffer& fb, uint8_t color, Point2 c, double rx,
                   double ry) {
  const double rmin = std::min(rx, ry);
  paint_region(
      fb, color, c.x - rx, c.y - ry, c.x + rx, c.y + ry, 1.0,
      [&](double x, double y) {
        const double nx = (x - c.x) / rx, ny = (y - c.y) / ry;
        // Conservative depth proxy: |grad(rho)| <= 1/rmin.
        return rmin * (1.0 - std::sqrt(nx * nx + ny * ny));
      },
      [&](double x, double y) {
        const double nx = (x - c.x) / rx, ny = (y - c.y) / ry;
        return nx * nx + ny * ny <= 1.0;
      });
}

void paint_polygon(FrameBuffer& fb, uint8_t color,
                   const std::vector<Point2>& pts) {
  if (pts.size() < 3) return;
  double gx0 = pts[0].x, gy0 = pts[0].y, gx1 = pts[0].x, gy1 = pts[0].y;
  for (const Point2& p : pts) {
    gx0 = std::min(gx0, p.x);
    gy0 = std::min(gy0, p.y);
    gx1 = std::max(gx1, p.x);
    gy1 = std::max(gy1, p.y);
  }
  const auto inside = [&](double x, double y) {
    return geom::point_in_polygon({x, y}, pts);
  };
  paint_region(
      fb, color, gx0, gy0, gx1, gy1, 1.0,
      [&](double x, double y) {
        double dmin = std::numeric_limits<double>::infinity();
        const size_t n = pts.size();
        for (size_t i = 0, j = n - 1; i < n; j = i++) {
          dmin = std::min(dmin, dist_point_segment(x, y, pts[j], pts[i]));
        }
        return inside(x, y) ? dmin : -dmin;
      },
      inside);
}

struct OpPainter {
  FrameBuffer& fb;

  void operator()(const StrokeSegment& s) {
    paint_capsule(fb, fb.color_index(s.color), s.a, s.b, s.width / 2);
  }
  void operator()(const StrokePolyline& s) {
    const uint8_t ci = fb.color_index(s.color);
    for (size_t i = 1; i < s.pts.size(); ++i) {
      paint_capsule(fb, ci, s.pts[i - 1], s.pts[i], s.width / 2);
    }
  }
  void operator()(const StrokePath& s) {
    const uint8_t ci = fb.color_index(s.color);
    for (const auto& stroke : s.strokes) {
      for (size_t i = 1; i < stroke.size(); ++i) {
        paint_capsule(fb, ci, stroke[i - 1], stroke[i], s.width / 2);
      }
    }
  }
  void operator()(const FillPolygon& p) {
    paint_polygon(fb, fb.color_index(p.color), p.pts);
  }
  void operator()(const FillCircle& c) {
    paint_disc(fb, fb.color_index(c.color), c.center, c.radius);
  }
  void operator()(const StrokeCircle& c) {
    paint_annulus(fb, fb.color_index(c.color), c.center, c.radius,
                  c.width / 2);
  }
  void operator()(const FillEllipse& e) {
    paint_ellipse(fb, fb.color_index(e.color), e.center, e.rx, e.ry);
  }
};

}  // namespace

Raster render_ops(const std::vector<DrawOp>& ops, const CanvasSpec& canvas) {
  validate(canvas);
  FrameBuffer fb(canvas);
  OpPainter painter{fb};
  for (const DrawOp& op : ops) std::visit(painter, op);

  Raster out;
  out.width = fb.w;
  out.height = fb.h;
  out.rgb.resize(static_cast<size_t>(fb.w) * fb.h * 3);

  const int ss = fb.ss;
  const int n_sub = ss * ss;
  const int half = n_sub / 2;
  uint8_t* dst = out.rgb.data();
  for (int py = 0; py < fb.h; ++py) {
    for (int px = 0; px < fb.w; ++px) {
      unsigned r = 0, g = 0, b = 0;
      for (int sy = 0; sy < ss; ++sy) {
        const uint8_t* row = fb.idx.data() +
                             (static_cast<size_t>(py) * ss + sy) * fb.sw +
                             static_cast<size_t>(px) * ss;
        for (int sx = 0; sx < ss; ++sx) {
          const Rgb c = fb.palette[row[sx]];
          r += c.r;
          g += c.g;
          b += c.b;
        }
      }
      *dst++ = static_cast<uint8_t>((r + half) / n_sub);
      *dst++ = static_cast<uint8_t>((g + half) / n_sub);
      *dst++ = static_cast<uint8_t>((b + half) / n_sub);
    }
  }
  return out;
}

Raster render_scene(const geom::Scene& scene, const CanvasSpec& canvas) {
  return render_ops(scene_ops(scene, canvas), canvas);
}

std::vector<uint8_t> render_png(const geom::Scene& scene,
                                const CanvasSpec& canvas) {
  return encode_png(render_scene(scene, canvas));
}

}  // namespace cogalign::render
