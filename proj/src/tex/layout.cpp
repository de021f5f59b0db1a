// layout.cpp - glyph placement for the label AST and canvas rendering.

#include "ocrsynth/tex/layout.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ocrsynth/error.hpp"
#include "ocrsynth/resources.hpp"
#include "ocrsynth/utf8.hpp"

namespace ocrsynth::tex {

void validate(const RenderStyle& style) {
  if (!(style.script_scale > 0.0 && style.script_scale <= 1.0)) {
    throw Error(ErrorKind::Contract, "script_scale must be in (0, 1]");
  }
  if (style.canvas_width <= 0 || style.canvas_height <= 0) {
    throw Error(ErrorKind::Contract, "canvas dimensions must be positive");
  }
  if (style.margin < 0) throw Error(ErrorKind::Contract, "margin must be >= 0");
}

const std::vector<std::string>& default_font_files() {
  static const std::vector<std::string> files = {
      "DejaVuSans.ttf",        "DejaVuSans-Bold.ttf",  "DejaVuSans-Oblique.ttf",
      "DejaVuSerif.ttf",       "DejaVuSerif-Bold.ttf", "DejaVuSerif-Italic.ttf",
      "DejaVuSansMono.ttf",    "STIXGeneralItalic.ttf",
  };
  return files;
}

const char* default_fallback_font_file() { return "STIXGeneral.ttf"; }

const std::vector<double>& default_sizes_pt() {
  static const std::vector<double> sizes = {10, 12, 14, 16, 18, 20};
  return sizes;
}

FontSet::FontSet(std::vector<Font> fonts, Font fallback,
                 std::vector<double> sizes_pt, double dpi)
    : fonts_(std::move(fonts)),
      fallback_(std::move(fallback)),
      sizes_pt_(std::move(sizes_pt)),
      dpi_(dpi) {
  if (fonts_.empty()) throw Error(ErrorKind::Config, "font list is empty");
  if (sizes_pt_.empty()) throw Error(ErrorKind::Config, "size list is empty");
  for (double s : sizes_pt_) {
    if (!(s > 0)) throw Error(ErrorKind::Config, "font sizes must be positive");
  }
  if (!(dpi_ > 0)) throw Error(ErrorKind::Config, "dpi must be positive");
}

FontSet FontSet::load(const std::filesystem::path& font_dir,
                      const std::vector<std::string>& files,
                      const std::string& fallback_file,
                      std::vector<double> sizes_pt, double dpi) {
  std::vector<Font> fonts;
  fonts.reserve(files.size());
  for (const auto& f : files) fonts.push_back(Font::load(font_dir / f));
  return FontSet(std::move(fonts), Font::load(font_dir / fallback_file),
                 std::move(sizes_pt), dpi);
}

FontSet FontSet::load_default() {
  return load(data_dir() / "fonts", default_font_files(),
              default_fallback_font_file(), default_sizes_pt(), kDefaultDpi);
}

const Font& FontSet::font(std::size_t id) const {
  if (id >= fonts_.size()) {
    throw Error(ErrorKind::Contract, "font_id " + std::to_string(id) +
                                         " out of range (have " +
                                         std::to_string(fonts_.size()) + ")");
  }
  return fonts_[id];
}

float FontSet::pixel_size(std::size_t size_id) const {
  if (size_id >= sizes_pt_.size()) {
    throw Error(ErrorKind::Contract, "size_id " + std::to_string(size_id) +
                                         " out of range (have " +
                                         std::to_string(sizes_pt_.size()) + ")");
  }
  return static_cast<float>(sizes_pt_[size_id] * dpi_ / 72.0);
}

bool FontSet::renderable(char32_t cp) const {
  if (fallback_.has_glyph(cp)) return true;
  return std::all_of(fonts_.begin(), fonts_.end(),
                     [cp](const Font& f) { return f.has_glyph(cp); });
}

void Rect::include(const Rect& r) {
  if (r.empty) return;
  if (empty) {
    *this = r;
    return;
  }
  x0 = std::min(x0, r.x0);
  y0 = std::min(y0, r.y0);
  x1 = std::max(x1, r.x1);
  y1 = std::max(y1, r.y1);
}

namespace {

class Typesetter {
 public:
  Typesetter(const RenderStyle& style, const FontSet& fonts,
             const CommandTable& commands)
      : style_(style),
        fonts_(fonts),
        primary_(fonts.font(style.font_id)),
        commands_(commands),
        base_size_(fonts.pixel_size(style.size_id)) {
    const float upem = static_cast<float>(primary_.units_per_em());
    const float ascent = static_cast<float>(primary_.ascender()) / upem;
    const float descent = static_cast<float>(primary_.descender()) / upem;
    line_advance_ = 1.2f * (ascent - descent) * base_size_;
    pen_x_ = static_cast<float>(style.margin);
    baseline_ = static_cast<float>(style.margin) + ascent * base_size_;
  }

  Layout run(const MathAst& ast) {
    place(ast.root, base_size_, 0);
    for (const auto& g : out_.glyphs) out_.ink.include(g.ink);
    out_.line_count = lines_;
    return std::move(out_);
  }

 private:
  void place(const Node& node, float size, int level) {
    switch (node.kind) {
      case NodeKind::Run:
        for (char32_t cp : utf8::decode(node.text)) place_glyph(cp, size, level);
        break;
      case NodeKind::Space:
        pen_x_ += space_width(node.text, size);
        break;
      case NodeKind::LineBreak:
        pen_x_ = static_cast<float>(style_.margin);
        baseline_ += line_advance_;
        ++lines_;
        break;
      case NodeKind::Group:
        for (const Node& child : node.children) place(child, size, level);
        break;
      case NodeKind::Symbol:
        place_symbol(node, size, level);
        break;
      case NodeKind::Script:
        place_script(node, size, level);
        break;
    }
  }

  float space_width(const std::string& form, float size) const {
    if (form == " ") {
      const std::uint16_t g = primary_.glyph_index(U' ');
      return static_cast<float>(primary_.advance_width(g)) * size /
             static_cast<float>(primary_.units_per_em());
    }
    const CommandInfo* info = commands_.find(form);
    const int eighteenths = info ? info->space_eighteenths : 0;
    return size * static_cast<float>(eighteenths) / 18.0f;
  }

  PlacedGlyph make_glyph(char32_t cp, float size, int level) const {
    const Font* font = &primary_;
    bool fallback = false;
    std::uint16_t gid = primary_.glyph_index(cp);
    if (gid == 0) {
      gid = fonts_.fallback().glyph_index(cp);
      if (gid == 0) throw MissingGlyphError(cp);
      font = &fonts_.fallback();
      fallback = true;
    }
    const float scale = size / static_cast<float>(font->units_per_em());
    PlacedGlyph g;
    g.codepoint = cp;
    g.from_fallback = fallback;
    g.glyph = gid;
    g.size_px = size;
    g.x = pen_x_;
    g.baseline = baseline_;
    g.advance = static_cast<float>(font->advance_width(gid)) * scale;
    g.script_level = level;
    const Outline ol = font->outline(gid);
    if (!ol.empty()) {
      g.ink = Rect{g.x + ol.x_min * scale, g.baseline - ol.y_max * scale,
                   g.x + ol.x_max * scale, g.baseline - ol.y_min * scale, false};
    }
    return g;
  }

  void place_glyph(char32_t cp, float size, int level) {
    PlacedGlyph g = make_glyph(cp, size, level);
    pen_x_ += g.advance;
    out_.glyphs.push_back(g);
  }

  Rect ink_since(std::size_t first) const {
    Rect r;
    for (std::size_t i = first; i < out_.glyphs.size(); ++i) r.include(out_.glyphs[i].ink);
    return r;
  }

  void shift_since(std::size_t first, float dx, float dy) {
    for (std::size_t i = first; i < out_.glyphs.size(); ++i) {
      PlacedGlyph& g = out_.glyphs[i];
      g.x += dx;
      g.baseline += dy;
      if (!g.ink.empty) {
        g.ink.x0 += dx;
        g.ink.x1 += dx;
        g.ink.y0 += dy;
        g.ink.y1 += dy;
      }
    }
  }

  void place_symbol(const Node& node, float size, int level) {
    const CommandInfo* info = commands_.find(node.text);
    if (!info) throw UnsupportedCommandError(node.text, 0);
    const Node* arg = node.argument();
    switch (info->kind) {
      case CommandKind::Symbol:
        place_glyph(info->codepoint, size, level);
        break;
      case CommandKind::Style:
        if (arg) place(*arg, size, level);
        break;
      case CommandKind::Blackboard:
        if (arg) place_blackboard(*arg, size, level);
        break;
      case CommandKind::Accent: {
        const std::size_t first = out_.glyphs.size();
        const float start_x = pen_x_;
        if (arg) place(*arg, size, level);
        Rect body = ink_since(first);
        if (body.empty) {
          body = Rect{start_x, baseline_ - 0.5f * size, pen_x_, baseline_, false};
        }
        PlacedGlyph accent = make_glyph(info->codepoint, size, level);
        if (!accent.ink.empty) {
          const float gap = 0.06f * size;
          const float dx = 0.5f * (body.x0 + body.x1) - 0.5f * (accent.ink.x0 + accent.ink.x1);
          const float dy = (body.y0 - gap) - accent.ink.y1;
          accent.x += dx;
          accent.baseline += dy;
          accent.ink.x0 += dx;
          accent.ink.x1 += dx;
          accent.ink.y0 += dy;
          accent.ink.y1 += dy;
          out_.glyphs.push_back(accent);
        }
        break;
      }
      case CommandKind::Space:
        pen_x_ += space_width(node.text, size);
        break;
      case CommandKind::LineBreak:
        place(Node::line_break(), size, level);
        break;
    }
  }

  void place_blackboard(const Node& arg, float size, int level) {
    if (arg.kind == NodeKind::Group) {
      for (const Node& c : arg.children) place_blackboard(c, size, level);
      return;
    }
    if (arg.kind == NodeKind::Space) {
      place(arg, size, level);
      return;
    }
    if (arg.kind != NodeKind::Run) {
      throw Error(ErrorKind::Input, "\\mathbb accepts only letters and digits");
    }
    for (char32_t cp : utf8::decode(arg.text)) {
      const char32_t mapped = blackboard_codepoint(cp);
      if (mapped == 0) {
        throw Error(ErrorKind::Input, "\\mathbb has no form for " + utf8::codepoint_name(cp));
      }
      place_glyph(mapped, size, level);
    }
  }

  void place_script(const Node& node, float size, int level) {
    place(node.base(), size, level);
    const float after_base = pen_x_;
    const float script_size = size * static_cast<float>(style_.script_scale);
    const float shift = size * static_cast<float>(style_.script_shift);
    const float base_baseline = baseline_;
    float end_x = after_base;

    if (const Node* sup = node.superscript()) {
      const std::size_t first = out_.glyphs.size();
      place(*sup, script_size, level + 1);
      end_x = std::max(end_x, pen_x_);
      const Rect ink = ink_since(first);
      float up = shift;
      if (!ink.empty) up = std::max(up, (ink.y1 - base_baseline) + 1.0f);
      shift_since(first, 0.0f, -up);
      pen_x_ = after_base;
      baseline_ = base_baseline;
    }
    if (const Node* sub = node.subscript()) {
      const std::size_t first = out_.glyphs.size();
      place(*sub, script_size, level + 1);
      end_x = std::max(end_x, pen_x_);
      const Rect ink = ink_since(first);
      float down = shift;
      if (!ink.empty) down = std::max(down, (base_baseline - ink.y0) + 1.0f);
      shift_since(first, 0.0f, down);
      baseline_ = base_baseline;
    }
    pen_x_ = end_x;
  }

  const RenderStyle& style_;
  const FontSet& fonts_;
  const Font& primary_;
  const CommandTable& commands_;
  float base_size_;
  float line_advance_ = 0;
  float pen_x_ = 0;
  float baseline_ = 0;
  int lines_ = 1;
  Layout out_;
};

}  // namespace

Layout layout(const MathAst& ast, const RenderStyle& style, const FontSet& fonts,
              const CommandTable& commands) {
  validate(style);
  return Typesetter(style, fonts, commands).run(ast);
}

RasterImage render_layout(const Layout& lay, const RenderStyle& style,
                          const FontSet& fonts) {
  validate(style);
  const int w = style.canvas_width;
  const int h = style.canvas_height;
  if (!lay.ink.empty &&
      (lay.ink.x0 < 0 || lay.ink.y0 < 0 || lay.ink.x1 > static_cast<float>(w) ||
       lay.ink.y1 > static_cast<float>(h))) {
    std::ostringstream msg;
    msg << "text overflow: ink spans [" << lay.ink.x0 << ", " << lay.ink.x1
        << "] x [" << lay.ink.y0 << ", " << lay.ink.y1 << "] on a " << w << "x"
        << h << " canvas";
    throw Error(ErrorKind::TextOverflow, msg.str());
  }

  std::vector<float> cover(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0.0f);
  const Font& primary = fonts.font(style.font_id);
  for (const PlacedGlyph& g : lay.glyphs) {
    if (g.ink.empty) continue;
    const Font& font = g.from_fallback ? fonts.fallback() : primary;
    const float ox = std::floor(g.x);
    const int origin_x = static_cast<int>(ox);
    const int origin_y = static_cast<int>(std::lround(g.baseline));
    const CoverageMask mask = font.rasterize(g.glyph, g.size_px, g.x - ox);
    for (int r = 0; r < mask.height; ++r) {
      const int y = origin_y + mask.top + r;
      if (y < 0 || y >= h) continue;
      for (int c = 0; c < mask.width; ++c) {
        const int x = origin_x + mask.left + c;
        if (x < 0 || x >= w) continue;
        const float m = mask.coverage[static_cast<std::size_t>(r) * static_cast<std::size_t>(mask.width) +
                                      static_cast<std::size_t>(c)];
        if (m <= 0.0f) continue;
        float& dst = cover[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                           static_cast<std::size_t>(x)];
        dst = 1.0f - (1.0f - dst) * (1.0f - m);
      }
    }
  }

  RasterImage img(w, h, 255);
  for (std::size_t i = 0; i < cover.size(); ++i) {
    const float v = 255.0f * (1.0f - std::clamp(cover[i], 0.0f, 1.0f));
    img.pixels[i] = static_cast<std::uint8_t>(std::lround(v));
  }
  return img;
}

RasterImage rasterize(const MathAst& ast, const RenderStyle& style,
                      const FontSet& fonts, const CommandTable& commands) {
  return render_layout(layout(ast, style, fonts, commands), style, fonts);
}

}  // namespace ocrsynth::tex
