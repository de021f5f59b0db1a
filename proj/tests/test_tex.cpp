// test_tex.cpp - parser, serializer, layout and rasterizer.

#include <doctest.h>

#include <algorithm>

#include "ocrsynth/error.hpp"
#include "ocrsynth/image.hpp"
#include "ocrsynth/tex/layout.hpp"
#include "ocrsynth/tex/parser.hpp"
#include "ocrsynth/utf8.hpp"

using namespace ocrsynth;
using namespace ocrsynth::tex;

namespace {

std::string dbg(std::string_view label) { return to_debug_string(parse_label(label).root); }

const FontSet& fonts() {
  static const FontSet set = FontSet::load_default();
  return set;
}

}  // namespace

TEST_CASE("parser: grammar-forced trees") {
  CHECK(dbg("x^{2}") == R"(Group[Script(Run("x"), sup=Run("2"))])");
  CHECK(dbg("H_{2}O") == R"(Group[Script(Run("H"), sub=Run("2")), Run("O")])");
  CHECK(dbg(R"(\bar{x} \\ y)") == R"(Group[Symbol("\\bar", Run("x")), LineBreak, Run("y")])");

  const auto ast = parse_label("x^{2}");
  REQUIRE(ast.root.children.size() == 1);
  const Node& s = ast.root.children[0];
  CHECK(s.kind == NodeKind::Script);
  CHECK(s.base() == Node::run("x"));
  CHECK(*s.superscript() == Node::run("2"));
  CHECK(s.subscript() == nullptr);
}

TEST_CASE("parser: scripts bind to the last character of a run") {
  CHECK(dbg("water^{2} level") ==
        R"(Group[Run("wate"), Script(Run("r"), sup=Run("2")), Space(" "), Run("level")])");
  CHECK(dbg("x_1^2") == dbg("x^{2}_{1}"));
  CHECK(dbg("^{a}") == R"(Group[Script(Group[], sup=Run("a"))])");
}

TEST_CASE("parser: errors") {
  CHECK_THROWS_AS(parse_label(R"(\frac{a}{b})"), UnsupportedCommandError);
  try {
    parse_label(R"(a \foo b)");
    FAIL("expected throw");
  } catch (const UnsupportedCommandError& e) {
    CHECK(e.command() == R"(\foo)");
  }
  CHECK_THROWS_AS(parse_label("{a"), SyntaxError);
  CHECK_THROWS_AS(parse_label("a}"), SyntaxError);
  CHECK_THROWS_AS(parse_label("x^"), SyntaxError);
  CHECK_THROWS_AS(parse_label("x_"), SyntaxError);
  CHECK_THROWS_AS(parse_label("x^{1}^{2}"), SyntaxError);
  CHECK_THROWS_AS(parse_label("a $ b"), SyntaxError);
  try {
    parse_label("ab{c");
    FAIL("expected throw");
  } catch (const SyntaxError& e) {
    CHECK(e.position() == 2);
  }
}

TEST_CASE("serializer: canonical forms") {
  MathAst a;
  a.root = Node::group({Node::script(Node::run("x"), Node::run("2"), std::nullopt)});
  CHECK(serialize(a) == "x^{2}");

  MathAst b;
  b.root = Node::group({Node::run("a"), Node::line_break(), Node::run("b")});
  CHECK(serialize(b) == R"(a \\ b)");

  CHECK(serialize(parse_label("x_1^2")) == "x^{2}_{1}");
  CHECK(serialize(parse_label(R"(\mathbb{R} \pm \bar{x})")) == R"(\mathbb{R} \pm \bar{x})");
}

TEST_CASE("serializer: round trip on hand-picked labels") {
  for (const char* label :
       {"", "x", "H_{2}O and CO_{2}", R"(42.5 \pm \lambda)", R"(a \\ b \\ c)",
        R"(\\ a)", R"(a \\)", R"({a b}^{c d})", R"(\sum_{i}^{n} x)", R"(\hat{\alpha})",
        R"(100\% \{x\} \; y \, z)", "naïve café", R"(\mathrm{NaCl_{2}} + H)",
        "x^{y^{z}}", "{}", R"(\dot{1}^{2})"}) {
    CAPTURE(label);
    const MathAst ast = parse_label(label);
    const std::string text = serialize(ast);
    CHECK(parse_label(text) == ast);
    CHECK(serialize(parse_label(text)) == text);
  }
}

TEST_CASE("fonts: every table codepoint is renderable") {
  for (const auto& [name, info] : CommandTable::builtin().entries()) {
    if (info.codepoint == 0) continue;
    CAPTURE(info.name);
    CHECK(fonts().renderable(info.codepoint));
  }
  for (char32_t c = 0x21; c < 0x7f; ++c) CHECK(fonts().renderable(c));
  CHECK(fonts().font_count() == 8);
  CHECK(fonts().size_count() == 6);
}

TEST_CASE("layout: empty group has no ink") {
  const Layout l = layout(MathAst{}, RenderStyle{}, fonts());
  CHECK(l.glyphs.empty());
  CHECK(l.ink.empty);
}

TEST_CASE("layout: run advances monotonically") {
  RenderStyle style;
  for (std::size_t f = 0; f < fonts().font_count(); ++f) {
    style.font_id = f;
    const Layout l = layout(parse_label("ab"), style, fonts());
    REQUIRE(l.glyphs.size() == 2);
    CHECK(l.glyphs[1].x >= l.glyphs[0].x + l.glyphs[0].advance - 1e-3f);
    CHECK(l.glyphs[1].ink.x0 >= l.glyphs[0].ink.x1 - 0.5f);
  }
}

TEST_CASE("layout: script boxes sit on the correct side of the baseline") {
  RenderStyle style;
  for (std::size_t f = 0; f < fonts().font_count(); ++f) {
    for (std::size_t s = 0; s < fonts().size_count(); ++s) {
      style.font_id = f;
      style.size_id = s;
      const Layout sub = layout(parse_label("H_{2}"), style, fonts());
      REQUIRE(sub.glyphs.size() == 2);
      CHECK(sub.glyphs[1].ink.y0 > sub.glyphs[0].baseline);
      CHECK(sub.glyphs[1].script_level == 1);
      const Layout sup = layout(parse_label("x^{g}"), style, fonts());
      REQUIRE(sup.glyphs.size() == 2);
      CHECK(sup.glyphs[1].ink.y1 < sup.glyphs[0].baseline);
    }
  }
}

TEST_CASE("layout: line breaks move down") {
  const Layout l = layout(parse_label(R"(a \\ b)"), RenderStyle{}, fonts());
  REQUIRE(l.glyphs.size() == 2);
  CHECK(l.line_count == 2);
  CHECK(l.glyphs[1].baseline > l.glyphs[0].baseline);
  CHECK(l.glyphs[1].x == doctest::Approx(l.glyphs[0].x));
}

TEST_CASE("layout: monotone ink width for runs") {
  RenderStyle style;
  std::string text;
  float last = 0;
  for (char c : std::string("The quick brown fox")) {
    text += c;
    if (c == ' ') continue;
    const Layout l = layout(parse_label(text), style, fonts());
    CHECK(l.ink.width() >= last);
    last = l.ink.width();
  }
}

TEST_CASE("rasterize: empty, ink, determinism") {
  const RenderStyle style;
  const RasterImage blank = rasterize(MathAst{}, style, fonts());
  CHECK(blank.width == 600);
  CHECK(blank.height == 160);
  CHECK(std::all_of(blank.pixels.begin(), blank.pixels.end(), [](auto p) { return p == 255; }));

  const MathAst ast = parse_label(R"(H_{2}O \pm \sum \mathbb{R})");
  const RasterImage a = rasterize(ast, style, fonts());
  CHECK(count_below(a, 128) > 0);
  CHECK(a == rasterize(ast, style, fonts()));

  // ink is anchored top-left
  int min_x = a.width, min_y = a.height;
  for (int y = 0; y < a.height; ++y)
    for (int x = 0; x < a.width; ++x)
      if (a.at(x, y) < 255) {
        min_x = std::min(min_x, x);
        min_y = std::min(min_y, y);
      }
  CHECK(min_x < 12);
  CHECK(min_y < 16);
}

TEST_CASE("rasterize: overflow and missing glyphs") {
  RenderStyle style;
  style.size_id = 5;
  std::string wide(80, 'W');
  CHECK_THROWS_AS(rasterize(parse_label(wide), style, fonts()), Error);
  try {
    rasterize(parse_label(wide), style, fonts());
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TextOverflow);
  }
  // U+E000 is a private-use codepoint none of the bundled fonts carry.
  CHECK_THROWS_AS(layout(parse_label(utf8::encode(U"")), style, fonts()),
                  MissingGlyphError);
}

TEST_CASE("style validation") {
  RenderStyle s;
  s.script_scale = 0;
  CHECK_THROWS(validate(s));
  s.script_scale = 1.0;
  CHECK_NOTHROW(validate(s));
  s.canvas_width = 0;
  CHECK_THROWS(validate(s));
}
