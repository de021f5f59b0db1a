// font.hpp - minimal TrueType (glyf) reader and anti-aliased outline
// rasterizer.
//
// Supports the tables needed to draw unhinted outlines: cmap (formats 4 and
// 12), head, hhea, hmtx, maxp, loca and glyf (simple and composite glyphs).
// CFF-flavoured OpenType fonts are rejected at load time.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ocrsynth::tex {

struct PointF {
  float x = 0;
  float y = 0;
};

struct OutlinePoint {
  float x = 0;
  float y = 0;
  bool on_curve = true;
};

/// Quadratic outline in font units (y up). Each contour starts on-curve and
/// never holds two consecutive off-curve points (implied midpoints are
/// materialized).
struct Outline {
  std::vector<std::vector<OutlinePoint>> contours;
  float x_min = 0, y_min = 0, x_max = 0, y_max = 0;
  bool empty() const { return contours.empty(); }
};

/// Anti-aliased coverage mask: values in [0, 1], row-major, y down.
struct CoverageMask {
  int left = 0;  // pixel position of column 0 relative to the pen origin
  int top = 0;   // pixel position of row 0 relative to the baseline (y down)
  int width = 0;
  int height = 0;
  std::vector<float> coverage;
};

class Font {
 public:
  static Font load(const std::filesystem::path& path);
  static Font from_bytes(std::vector<std::uint8_t> data, std::string name);

  const std::string& name() const { return name_; }
  int units_per_em() const { return units_per_em_; }
  int ascender() const { return ascender_; }
  int descender() const { return descender_; }  // negative
  int line_gap() const { return line_gap_; }

  /// 0 when the font has no glyph for the codepoint.
  std::uint16_t glyph_index(char32_t codepoint) const;
  bool has_glyph(char32_t codepoint) const { return glyph_index(codepoint) != 0; }

  int advance_width(std::uint16_t glyph) const;  // font units
  Outline outline(std::uint16_t glyph) const;

  /// Rasterizes `glyph` at `pixel_size` px/em with the pen origin at
  /// (origin_x, 0) where origin_x carries the sub-pixel offset in [0, 1).
  CoverageMask rasterize(std::uint16_t glyph, float pixel_size,
                         float origin_x_fraction) const;

 private:
  Font() = default;
  void parse();
  void append_glyph(std::uint16_t glyph, const float transform[6], int depth,
                    Outline& out) const;

  std::uint16_t u16(std::size_t offset) const;
  std::int16_t s16(std::size_t offset) const;
  std::uint32_t u32(std::size_t offset) const;

  std::string name_;
  std::vector<std::uint8_t> data_;
  std::size_t cmap_subtable_ = 0;
  int cmap_format_ = 0;
  std::size_t glyf_ = 0, loca_ = 0, hmtx_ = 0;
  int index_to_loc_format_ = 0;
  int num_glyphs_ = 0;
  int num_hmetrics_ = 0;
  int units_per_em_ = 1000;
  int ascender_ = 0, descender_ = 0, line_gap_ = 0;
};

/// Coverage rasterizer for closed polygons given in pixel space (y down).
/// Accumulates signed area per cell and integrates along each row, so the
/// nonzero-winding interior gets full coverage and edges get fractional
/// coverage.
class CoverageRasterizer {
 public:
  CoverageRasterizer(int width, int height);
  void line(PointF p0, PointF p1);
  std::vector<float> finish() const;

 private:
  int width_;
  int height_;
  std::vector<float> accum_;
};

}  // namespace ocrsynth::tex
