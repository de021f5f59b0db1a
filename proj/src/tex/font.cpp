// font.cpp - TrueType table parsing and outline rasterization.

#include "ocrsynth/tex/font.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include "ocrsynth/error.hpp"

namespace ocrsynth::tex {
namespace {

constexpr std::uint32_t tag(const char (&s)[5]) {
  return (static_cast<std::uint32_t>(s[0]) << 24) |
         (static_cast<std::uint32_t>(s[1]) << 16) |
         (static_cast<std::uint32_t>(s[2]) << 8) | static_cast<std::uint32_t>(s[3]);
}

// Composite glyph flags.
constexpr std::uint16_t kArgsAreWords = 0x0001;
constexpr std::uint16_t kArgsAreXY = 0x0002;
constexpr std::uint16_t kHaveScale = 0x0008;
constexpr std::uint16_t kMoreComponents = 0x0020;
constexpr std::uint16_t kHaveXYScale = 0x0040;
constexpr std::uint16_t kHaveTwoByTwo = 0x0080;

constexpr int kMaxCompositeDepth = 8;

PointF lerp(float t, PointF a, PointF b) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

void flatten_quad(CoverageRasterizer& r, PointF p0, PointF p1, PointF p2) {
  const float devx = p0.x - 2.0f * p1.x + p2.x;
  const float devy = p0.y - 2.0f * p1.y + p2.y;
  const float devsq = devx * devx + devy * devy;
  if (devsq < 0.333f) {
    r.line(p0, p2);
    return;
  }
  const int n = 1 + static_cast<int>(std::floor(std::sqrt(std::sqrt(3.0f * devsq))));
  PointF prev = p0;
  for (int i = 1; i < n; ++i) {
    const float t = static_cast<float>(i) / static_cast<float>(n);
    const PointF p = lerp(t, lerp(t, p0, p1), lerp(t, p1, p2));
    r.line(prev, p);
    prev = p;
  }
  r.line(prev, p2);
}

}  // namespace

Font Font::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open font " + path.string());
  std::vector<std::uint8_t> data((std::istreambuf_iterator<char>(in)), {});
  return from_bytes(std::move(data), path.filename().string());
}

Font Font::from_bytes(std::vector<std::uint8_t> data, std::string name) {
  Font font;
  font.name_ = std::move(name);
  font.data_ = std::move(data);
  font.parse();
  return font;
}

std::uint16_t Font::u16(std::size_t o) const {
  if (o + 2 > data_.size()) throw Error(ErrorKind::Input, name_ + ": truncated font");
  return static_cast<std::uint16_t>((data_[o] << 8) | data_[o + 1]);
}

std::int16_t Font::s16(std::size_t o) const { return static_cast<std::int16_t>(u16(o)); }

std::uint32_t Font::u32(std::size_t o) const {
  return (static_cast<std::uint32_t>(u16(o)) << 16) | u16(o + 2);
}

void Font::parse() {
  const std::uint32_t version = u32(0);
  if (version != 0x00010000 && version != tag("true")) {
    throw Error(ErrorKind::Input, name_ + ": not a TrueType outline font");
  }
  const int num_tables = u16(4);
  std::size_t head = 0, hhea = 0, maxp = 0, cmap = 0;
  for (int i = 0; i < num_tables; ++i) {
    const std::size_t rec = 12 + 16 * static_cast<std::size_t>(i);
    const std::uint32_t t = u32(rec);
    const std::size_t offset = u32(rec + 8);
    if (t == tag("head")) head = offset;
    else if (t == tag("hhea")) hhea = offset;
    else if (t == tag("maxp")) maxp = offset;
    else if (t == tag("cmap")) cmap = offset;
    else if (t == tag("glyf")) glyf_ = offset;
    else if (t == tag("loca")) loca_ = offset;
    else if (t == tag("hmtx")) hmtx_ = offset;
  }
  if (!head || !hhea || !maxp || !cmap || !glyf_ || !loca_ || !hmtx_) {
    throw Error(ErrorKind::Input, name_ + ": missing required TrueType tables");
  }
  units_per_em_ = u16(head + 18);
  index_to_loc_format_ = s16(head + 50);
  num_glyphs_ = u16(maxp + 4);
  ascender_ = s16(hhea + 4);
  descender_ = s16(hhea + 6);
  line_gap_ = s16(hhea + 8);
  num_hmetrics_ = u16(hhea + 34);

  // Prefer a full-repertoire (format 12) Unicode subtable, then BMP format 4.
  const int num_subtables = u16(cmap + 2);
  int best_rank = 0;
  for (int i = 0; i < num_subtables; ++i) {
    const std::size_t rec = cmap + 4 + 8 * static_cast<std::size_t>(i);
    const int platform = u16(rec);
    const int encoding = u16(rec + 2);
    const std::size_t sub = cmap + u32(rec + 4);
    const int format = u16(sub);
    int rank = 0;
    if (format == 12 && (platform == 0 || (platform == 3 && encoding == 10))) rank = 3;
    else if (format == 4 && platform == 3 && encoding == 1) rank = 2;
    else if (format == 4 && platform == 0) rank = 1;
    if (rank > best_rank) {
      best_rank = rank;
      cmap_subtable_ = sub;
      cmap_format_ = format;
    }
  }
  if (best_rank == 0) {
    throw Error(ErrorKind::Input, name_ + ": no Unicode cmap subtable");
  }
}

std::uint16_t Font::glyph_index(char32_t cp) const {
  const std::size_t t = cmap_subtable_;
  if (cmap_format_ == 12) {
    std::uint32_t lo = 0, hi = u32(t + 12);
    while (lo < hi) {
      const std::uint32_t mid = (lo + hi) / 2;
      const std::size_t g = t + 16 + 12 * static_cast<std::size_t>(mid);
      const std::uint32_t start = u32(g), end = u32(g + 4);
      if (cp < start) hi = mid;
      else if (cp > end) lo = mid + 1;
      else return static_cast<std::uint16_t>(u32(g + 8) + (cp - start));
    }
    return 0;
  }
  if (cp > 0xFFFF) return 0;
  const std::size_t seg_count = u16(t + 6) / 2;
  const std::size_t ends = t + 14;
  const std::size_t starts = ends + 2 * seg_count + 2;
  const std::size_t deltas = starts + 2 * seg_count;
  const std::size_t ranges = deltas + 2 * seg_count;
  std::size_t lo = 0, hi = seg_count;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (u16(ends + 2 * mid) < cp) lo = mid + 1;
    else hi = mid;
  }
  if (lo >= seg_count) return 0;
  const std::uint16_t start = u16(starts + 2 * lo);
  if (cp < start) return 0;
  const std::uint16_t delta = u16(deltas + 2 * lo);
  const std::uint16_t range_offset = u16(ranges + 2 * lo);
  if (range_offset == 0) return static_cast<std::uint16_t>(cp + delta);
  const std::size_t addr = ranges + 2 * lo + range_offset + 2 * (cp - start);
  const std::uint16_t g = u16(addr);
  return g == 0 ? 0 : static_cast<std::uint16_t>(g + delta);
}

int Font::advance_width(std::uint16_t glyph) const {
  const int idx = std::min<int>(glyph, num_hmetrics_ - 1);
  return u16(hmtx_ + 4 * static_cast<std::size_t>(idx));
}

Outline Font::outline(std::uint16_t glyph) const {
  Outline out;
  const float identity[6] = {1, 0, 0, 1, 0, 0};
  append_glyph(glyph, identity, 0, out);
  bool first = true;
  for (const auto& contour : out.contours) {
    for (const auto& p : contour) {
      if (first) {
        out.x_min = out.x_max = p.x;
        out.y_min = out.y_max = p.y;
        first = false;
      }
      out.x_min = std::min(out.x_min, p.x);
      out.x_max = std::max(out.x_max, p.x);
      out.y_min = std::min(out.y_min, p.y);
      out.y_max = std::max(out.y_max, p.y);
    }
  }
  return out;
}

void Font::append_glyph(std::uint16_t glyph, const float m[6], int depth,
                        Outline& out) const {
  if (glyph >= num_glyphs_ || depth > kMaxCompositeDepth) return;
  std::size_t start, end;
  if (index_to_loc_format_ == 0) {
    start = 2 * static_cast<std::size_t>(u16(loca_ + 2 * glyph));
    end = 2 * static_cast<std::size_t>(u16(loca_ + 2 * (glyph + 1)));
  } else {
    start = u32(loca_ + 4 * glyph);
    end = u32(loca_ + 4 * (glyph + 1));
  }
  if (start == end) return;  // e.g. space
  const std::size_t g = glyf_ + start;
  const int num_contours = s16(g);

  auto apply = [&](float x, float y) {
    return PointF{m[0] * x + m[2] * y + m[4], m[1] * x + m[3] * y + m[5]};
  };

  if (num_contours >= 0) {
    std::vector<int> end_points(static_cast<std::size_t>(num_contours));
    for (int i = 0; i < num_contours; ++i) end_points[i] = u16(g + 10 + 2 * i);
    if (num_contours == 0) return;
    const std::size_t num_points = static_cast<std::size_t>(end_points.back()) + 1;
    const std::size_t instr_len = u16(g + 10 + 2 * num_contours);
    std::size_t p = g + 12 + 2 * num_contours + instr_len;

    std::vector<std::uint8_t> flags;
    flags.reserve(num_points);
    while (flags.size() < num_points) {
      if (p >= data_.size()) throw Error(ErrorKind::Input, name_ + ": truncated glyph");
      const std::uint8_t f = data_[p++];
      flags.push_back(f);
      if (f & 0x08) {
        std::uint8_t repeat = data_[p++];
        while (repeat-- && flags.size() < num_points) flags.push_back(f);
      }
    }
    std::vector<int> xs(num_points), ys(num_points);
    int value = 0;
    for (std::size_t i = 0; i < num_points; ++i) {
      const std::uint8_t f = flags[i];
      if (f & 0x02) {
        const int d = data_[p++];
        value += (f & 0x10) ? d : -d;
      } else if (!(f & 0x10)) {
        value += s16(p);
        p += 2;
      }
      xs[i] = value;
    }
    value = 0;
    for (std::size_t i = 0; i < num_points; ++i) {
      const std::uint8_t f = flags[i];
      if (f & 0x04) {
        const int d = data_[p++];
        value += (f & 0x20) ? d : -d;
      } else if (!(f & 0x20)) {
        value += s16(p);
        p += 2;
      }
      ys[i] = value;
    }

    std::size_t first = 0;
    for (int c = 0; c < num_contours; ++c) {
      const std::size_t last = static_cast<std::size_t>(end_points[c]);
      if (last < first || last >= num_points) break;
      const std::size_t n = last - first + 1;
      std::vector<OutlinePoint> raw;
      raw.reserve(n);
      for (std::size_t i = first; i <= last; ++i) {
        const PointF q = apply(static_cast<float>(xs[i]), static_cast<float>(ys[i]));
        raw.push_back({q.x, q.y, (flags[i] & 0x01) != 0});
      }
      first = last + 1;
      if (n < 2) continue;

      // Rotate so the contour starts on-curve, synthesizing one if needed.
      std::vector<OutlinePoint> contour;
      auto on = std::find_if(raw.begin(), raw.end(),
                             [](const OutlinePoint& q) { return q.on_curve; });
      if (on == raw.end()) {
        const OutlinePoint& a = raw[0];
        const OutlinePoint& b = raw[1];
        raw.insert(raw.begin() + 1, {(a.x + b.x) / 2, (a.y + b.y) / 2, true});
        on = raw.begin() + 1;
      }
      std::rotate(raw.begin(), on, raw.end());
      for (std::size_t i = 0; i < raw.size(); ++i) {
        const OutlinePoint& cur = raw[i];
        if (!contour.empty() && !cur.on_curve && !contour.back().on_curve) {
          const OutlinePoint& prev = contour.back();
          contour.push_back({(prev.x + cur.x) / 2, (prev.y + cur.y) / 2, true});
        }
        contour.push_back(cur);
      }
      out.contours.push_back(std::move(contour));
    }
    return;
  }

  // Composite glyph.
  std::size_t p = g + 10;
  std::uint16_t flags;
  do {
    flags = u16(p);
    const std::uint16_t component = u16(p + 2);
    p += 4;
    float dx = 0, dy = 0;
    if (flags & kArgsAreWords) {
      dx = s16(p);
      dy = s16(p + 2);
      p += 4;
    } else {
      dx = static_cast<std::int8_t>(data_[p]);
      dy = static_cast<std::int8_t>(data_[p + 1]);
      p += 2;
    }
    if (!(flags & kArgsAreXY)) dx = dy = 0;  // point matching is not supported
    float a = 1, b = 0, c = 0, d = 1;
    auto f2dot14 = [&](std::size_t o) { return static_cast<float>(s16(o)) / 16384.0f; };
    if (flags & kHaveScale) {
      a = d = f2dot14(p);
      p += 2;
    } else if (flags & kHaveXYScale) {
      a = f2dot14(p);
      d = f2dot14(p + 2);
      p += 4;
    } else if (flags & kHaveTwoByTwo) {
      a = f2dot14(p);
      b = f2dot14(p + 2);
      c = f2dot14(p + 4);
      d = f2dot14(p + 6);
      p += 8;
    }
    // parent * child
    const float child[6] = {a, b, c, d, dx, dy};
    const float composed[6] = {
        m[0] * child[0] + m[2] * child[1],
        m[1] * child[0] + m[3] * child[1],
        m[0] * child[2] + m[2] * child[3],
        m[1] * child[2] + m[3] * child[3],
        m[0] * child[4] + m[2] * child[5] + m[4],
        m[1] * child[4] + m[3] * child[5] + m[5],
    };
    append_glyph(component, composed, depth + 1, out);
  } while (flags & kMoreComponents);
}

CoverageMask Font::rasterize(std::uint16_t glyph, float pixel_size,
                             float origin_x_fraction) const {
  CoverageMask mask;
  const Outline ol = outline(glyph);
  if (ol.empty()) return mask;
  const float scale = pixel_size / static_cast<float>(units_per_em_);
  mask.left = static_cast<int>(std::floor(origin_x_fraction + ol.x_min * scale)) - 1;
  const int right = static_cast<int>(std::ceil(origin_x_fraction + ol.x_max * scale)) + 1;
  mask.top = static_cast<int>(std::floor(-ol.y_max * scale)) - 1;
  const int bottom = static_cast<int>(std::ceil(-ol.y_min * scale)) + 1;
  mask.width = right - mask.left;
  mask.height = bottom - mask.top;

  CoverageRasterizer raster(mask.width, mask.height);
  auto to_pixel = [&](const OutlinePoint& q) {
    return PointF{origin_x_fraction + q.x * scale - static_cast<float>(mask.left),
                  -q.y * scale - static_cast<float>(mask.top)};
  };
  for (const auto& contour : ol.contours) {
    const std::size_t n = contour.size();
    std::size_t i = 0;
    while (i < n) {
      const PointF p0 = to_pixel(contour[i]);
      const OutlinePoint& next = contour[(i + 1) % n];
      if (next.on_curve) {
        raster.line(p0, to_pixel(next));
        i += 1;
      } else {
        flatten_quad(raster, p0, to_pixel(next), to_pixel(contour[(i + 2) % n]));
        i += 2;
      }
    }
  }
  mask.coverage = raster.finish();
  return mask;
}

CoverageRasterizer::CoverageRasterizer(int width, int height)
    : width_(width),
      height_(height),
      accum_(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) + 3, 0.0f) {}

void CoverageRasterizer::line(PointF p0, PointF p1) {
  if (std::fabs(p0.y - p1.y) <= 1e-6f) return;
  float dir = 1.0f;
  if (p0.y > p1.y) {
    std::swap(p0, p1);
    dir = -1.0f;
  }
  const float dxdy = (p1.x - p0.x) / (p1.y - p0.y);
  float x = p0.x;
  int y0 = static_cast<int>(p0.y);
  if (p0.y < 0.0f) {
    x -= p0.y * dxdy;
    y0 = 0;
  }
  const int y_end = std::min(height_, static_cast<int>(std::ceil(p1.y)));
  const auto size = static_cast<long>(accum_.size());
  auto add = [&](long index, float v) {
    if (index >= 0 && index < size) accum_[static_cast<std::size_t>(index)] += v;
  };
  for (int y = y0; y < y_end; ++y) {
    const long row = static_cast<long>(y) * width_;
    const float dy = std::min(static_cast<float>(y + 1), p1.y) -
                     std::max(static_cast<float>(y), p0.y);
    const float xnext = x + dxdy * dy;
    const float d = dy * dir;
    const float x0 = std::min(x, xnext);
    const float x1 = std::max(x, xnext);
    const float x0floor = std::floor(x0);
    const int x0i = static_cast<int>(x0floor);
    const float x1ceil = std::ceil(x1);
    const int x1i = static_cast<int>(x1ceil);
    if (x1i <= x0i + 1) {
      const float xmf = 0.5f * (x + xnext) - x0floor;
      add(row + x0i, d - d * xmf);
      add(row + x0i + 1, d * xmf);
    } else {
      const float s = 1.0f / (x1 - x0);
      const float x0f = x0 - x0floor;
      const float a0 = 0.5f * s * (1.0f - x0f) * (1.0f - x0f);
      const float x1f = x1 - x1ceil + 1.0f;
      const float am = 0.5f * s * x1f * x1f;
      add(row + x0i, d * a0);
      if (x1i == x0i + 2) {
        add(row + x0i + 1, d * (1.0f - a0 - am));
      } else {
        const float a1 = s * (1.5f - x0f);
        add(row + x0i + 1, d * (a1 - a0));
        for (int xi = x0i + 2; xi < x1i - 1; ++xi) add(row + xi, d * s);
        const float a2 = a1 + static_cast<float>(x1i - x0i - 3) * s;
        add(row + x1i - 1, d * (1.0f - a2 - am));
      }
      add(row + x1i, d * am);
    }
    x = xnext;
  }
}

std::vector<float> CoverageRasterizer::finish() const {
  std::vector<float> out(static_cast<std::size_t>(width_) * static_cast<std::size_t>(height_));
  for (int y = 0; y < height_; ++y) {
    float acc = 0.0f;
    for (int x = 0; x < width_; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                            static_cast<std::size_t>(x);
      acc += accum_[i];
      out[i] = std::min(1.0f, std::fabs(acc));
    }
  }
  return out;
}

}  // namespace ocrsynth::tex
