// layout.hpp - typesetting of MathAst into positioned glyphs, and rendering
// of those glyphs onto a canvas.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ocrsynth/image.hpp"
#include "ocrsynth/tex/ast.hpp"
#include "ocrsynth/tex/commands.hpp"
#include "ocrsynth/tex/font.hpp"

namespace ocrsynth::tex {

struct RenderStyle {
  std::size_t font_id = 0;  // index into FontSet fonts
  std::size_t size_id = 0;  // index into FontSet sizes
  double script_scale = 0.7;
  double script_shift = 0.35;  // fraction of the base em
  int canvas_height = 160;
  int canvas_width = 600;
  int margin = 4;
};

/// Throws Error(Contract) when script_scale is outside (0, 1] or the canvas
/// is not positive.
void validate(const RenderStyle& style);

/// Bundled default font files (8 text fonts) and point sizes.
const std::vector<std::string>& default_font_files();
const char* default_fallback_font_file();
const std::vector<double>& default_sizes_pt();
constexpr double kDefaultDpi = 100.0;

/// Immutable after load; may be shared between threads.
class FontSet {
 public:
  FontSet(std::vector<Font> fonts, Font fallback, std::vector<double> sizes_pt,
          double dpi);

  static FontSet load(const std::filesystem::path& font_dir,
                      const std::vector<std::string>& files,
                      const std::string& fallback_file,
                      std::vector<double> sizes_pt, double dpi = kDefaultDpi);
  /// Fonts and sizes shipped in <data_dir>/fonts.
  static FontSet load_default();

  const Font& font(std::size_t id) const;
  const Font& fallback() const { return fallback_; }
  std::size_t font_count() const { return fonts_.size(); }
  std::size_t size_count() const { return sizes_pt_.size(); }
  const std::vector<double>& sizes_pt() const { return sizes_pt_; }
  double dpi() const { return dpi_; }
  float pixel_size(std::size_t size_id) const;

  /// True when the fallback (or every text font) can draw the codepoint.
  bool renderable(char32_t codepoint) const;

 private:
  std::vector<Font> fonts_;
  Font fallback_;
  std::vector<double> sizes_pt_;
  double dpi_;
};

struct Rect {
  float x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  bool empty = true;

  float width() const { return empty ? 0.0f : x1 - x0; }
  float height() const { return empty ? 0.0f : y1 - y0; }
  void include(const Rect& r);
};

/// One glyph placed on the canvas. Coordinates are canvas pixels, y down;
/// `ink` is the outline bounding box.
struct PlacedGlyph {
  char32_t codepoint = 0;
  bool from_fallback = false;
  std::uint16_t glyph = 0;
  float size_px = 0;
  float x = 0;         // pen origin
  float baseline = 0;  // y of the baseline
  float advance = 0;
  Rect ink;
  int script_level = 0;
};

struct Layout {
  std::vector<PlacedGlyph> glyphs;
  Rect ink;
  int line_count = 1;
};

/// Glyphs flow left to right from the top-left margin; scripts are scaled by
/// script_scale and shifted by script_shift of the base em (further if
/// needed so a subscript's ink starts below the base baseline and a
/// superscript's ink ends above it); a line break starts a new line 1.2 line
/// heights lower. Throws MissingGlyphError when neither the selected font nor
/// the fallback has a glyph.
Layout layout(const MathAst& ast, const RenderStyle& style, const FontSet& fonts,
              const CommandTable& commands = CommandTable::builtin());

/// Canvas-sized white image with anti-aliased ink. Throws Error(TextOverflow)
/// when the ink does not fit the canvas.
RasterImage rasterize(const MathAst& ast, const RenderStyle& style,
                      const FontSet& fonts,
                      const CommandTable& commands = CommandTable::builtin());

RasterImage render_layout(const Layout& layout, const RenderStyle& style,
                          const FontSet& fonts);

}  // namespace ocrsynth::tex
