// test_labelgen.cpp

#include <doctest.h>

#include <cmath>
#include <regex>
#include <set>

#include "ocrsynth/error.hpp"
#include "ocrsynth/labelgen.hpp"
#include "ocrsynth/resources.hpp"
#include "ocrsynth/tex/parser.hpp"
#include "ocrsynth/utf8.hpp"

using namespace ocrsynth;

namespace {

EnglishGenConfig quiet_english() {
  EnglishGenConfig cfg;
  cfg.p1 = cfg.p2 = cfg.p3 = cfg.p4 = 0.0;
  return cfg;
}

const Corpus& sample_corpus() {
  static const Corpus c =
      load_corpus(data_dir() / "corpus" / "sample.txt", CorpusFormat::LinePerDocument);
  return c;
}

std::size_t count_of(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + needle.size())) ++n;
  return n;
}

}  // namespace

TEST_CASE("english: no perturbation joins the span with single spaces") {
  const Corpus c = corpus_from_texts({"alpha beta gamma delta"});
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const LatexLabel l = gen_english_label(c, quiet_english(), rng);
    CHECK(l.kind == LabelKind::English);
    CHECK(std::string("alpha beta gamma delta").ends_with(l.text));
  }
}

TEST_CASE("english: fixed draws force a superscript") {
  ScriptedDraws d;
  d.reals({0.0, 0.5, 0.5, 0.5}).integers({0, 0, 2});
  CHECK(perturb_words({"water", "level"}, EnglishGenConfig{}, d) == "water^{2} level");
  CHECK(d.exhausted());
}

TEST_CASE("english: symbols, arguments and breaks") {
  EnglishGenConfig cfg = quiet_english();
  cfg.p3 = 1.0;
  cfg.symbol_inventory = {"\\pm"};
  cfg.arg_command_inventory = {"\\bar"};
  {
    ScriptedDraws d;  // symbol at slot 2 (end), inventory item 0
    d.reals({0.5, 0.5, 0.0, 0.5}).integers({2, 0});
    CHECK(perturb_words({"a", "b"}, cfg, d) == "a b \\pm");
  }
  {
    ScriptedDraws d;  // \bar at slot 0, letter 'x' (index 23)
    d.reals({0.5, 0.5, 0.0, 0.0, 0.5}).integers({0, 1, 23});
    CHECK(perturb_words({"a", "b"}, cfg, d) == "\\bar{x} a b");
  }
  {
    ScriptedDraws d;  // \bar with digit '7'
    d.reals({0.5, 0.5, 0.0, 0.9, 0.5}).integers({1, 1, 7});
    CHECK(perturb_words({"a", "b"}, cfg, d) == "a \\bar{7} b");
  }
  cfg.p3 = 0.0;
  cfg.p4 = 1.0;
  {
    ScriptedDraws d;  // k = 2 (weighted draw 0.8), gaps 2 then 0
    d.reals({0.5, 0.5, 0.5, 0.0, 0.8}).integers({2, 1});
    CHECK(perturb_words({"a", "b", "c", "d"}, cfg, d) == "a \\\\ b c \\\\ d");
  }
  {
    Rng rng(1);  // one word: no gap, so no break
    EnglishTrace t;
    CHECK(perturb_words({"solo"}, cfg, rng, &t) == "solo");
    CHECK(t.breaks_fired);
    CHECK(t.breaks_inserted == 0);
  }
}

TEST_CASE("english: break count law") {
  const auto w = break_count_weights(4);
  // oracle: 1, 1/4, 1/9, 1/16 over their sum 205/144
  const double total = 1.0 + 1.0 / 4 + 1.0 / 9 + 1.0 / 16;
  CHECK(w[0] == doctest::Approx(1.0 / total));
  CHECK(w[0] == doctest::Approx(0.702439).epsilon(1e-6));
  CHECK(w[1] == doctest::Approx(0.175610).epsilon(1e-5));
  CHECK(w[2] == doctest::Approx(0.078049).epsilon(1e-5));
  CHECK(w[3] == doctest::Approx(0.043902).epsilon(1e-5));

  EnglishGenConfig cfg = quiet_english();
  cfg.p4 = 1.0;
  Rng rng(2024);
  std::vector<double> hist(5, 0.0);
  const int draws = 1000000;
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f", "g", "h", "i", "j"};
  for (int i = 0; i < draws; ++i) {
    EnglishTrace t;
    const std::string s = perturb_words(words, cfg, rng, &t);
    hist[count_of(s, "\\\\")] += 1;
  }
  CHECK(hist[0] == 0);
  for (int k = 1; k <= 4; ++k) CHECK(hist[k] / draws == doctest::Approx(w[k - 1]).epsilon(0.01));
}

TEST_CASE("english: words are escaped or rejected") {
  CHECK(word_to_tex("50%") == "50\\%");
  CHECK(word_to_tex("R&D") == "R\\&D");
  CHECK(word_to_tex("{x}") == "\\{x\\}");
  CHECK(word_to_tex("snake_case") == "snake\\_case");
  CHECK(word_to_tex("naïve") == "naïve");
  CHECK_FALSE(word_to_tex("a\\b"));
  CHECK_FALSE(word_to_tex("x^2"));
  CHECK_FALSE(word_to_tex("~home"));
  CHECK_FALSE(word_to_tex("bad\xff"));
  CHECK_FALSE(word_to_tex("é", [](char32_t c) { return c < 0x80; }));
  for (const char* w : {"50%", "R&D", "{x}", "$5", "#1", "a_b"}) {
    CHECK_NOTHROW(tex::parse_label(*word_to_tex(w)));
  }
}

TEST_CASE("script content") {
  ScriptedDraws d;
  d.integers({0, 2});
  CHECK(gen_script_content(d) == "2");
  const std::regex shape("[A-Za-z0-9]{1,3}");
  Rng rng(8);
  for (int i = 0; i < 10000; ++i) {
    const std::string s = gen_script_content(rng);
    CHECK(!s.empty());
    CHECK(std::regex_match(s, shape));
  }
}

TEST_CASE("chem: fixed draws") {
  ChemGenConfig cfg;
  cfg.upright_compounds = false;
  {
    ScriptedDraws d;
    d.integers({0, 0, 1});
    CHECK(gen_compound(cfg, d) == "H_{2}");
  }
  {
    ScriptedDraws d;
    d.integers({1, 10, 0, 16, 0});
    CHECK(gen_compound(cfg, d) == "NaCl");
  }
  {
    ScriptedDraws d;
    d.integers({1, 1, 0, 1, 7, 0, 2, 1, 5, 0, 7, 1});
    CHECK(gen_chem_label(cfg, d).text == "H_{2}O and CO_{2}");
  }
  cfg.upright_compounds = true;
  {
    ScriptedDraws d;
    d.integers({0, 1, 0, 1, 7, 0});
    CHECK(gen_chem_label(cfg, d).text == "\\mathrm{H_{2}O}");
  }
}

TEST_CASE("chem: structural properties") {
  ChemGenConfig cfg;
  const std::set<std::string> elements(cfg.element_symbols.begin(), cfg.element_symbols.end());
  CHECK(elements.size() == 118);
  Rng rng(31);
  for (int i = 0; i < 10000; ++i) {
    const std::string compound = gen_compound(cfg, rng);
    // count element symbols via the parse tree: each capital letter starts one
    std::size_t n = 0;
    for (char c : compound) n += (c >= 'A' && c <= 'Z') ? 1 : 0;
    CHECK(n >= 1);
    CHECK(n <= cfg.max_elements);
    CHECK_NOTHROW(tex::parse_label(compound));
  }
  for (bool upright : {true, false}) {
    cfg.upright_compounds = upright;
    for (int i = 0; i < 10000; ++i) {
      const LatexLabel l = gen_chem_label(cfg, rng);
      CHECK(l.text.find("_{1}") == std::string::npos);
    }
  }
  ScriptedDraws one;
  one.integers({0, 0, 0, 0});
  const std::string single = gen_chem_label(cfg, one).text;
  for (const auto& conj : cfg.conjoiners) CHECK(single.find(" " + conj + " ") == std::string::npos);
}

TEST_CASE("numeric: fixed draws") {
  NumericGenConfig cfg;
  ScriptedDraws d;
  d.integers({1, 1, 1, 0}).reals({0.1, 42.5 / 100000.0, 0.9});
  CHECK(gen_numeric_label(cfg, d).text == "42.5 \\pm \\lambda");
  CHECK(d.exhausted());

  ScriptedDraws one;
  one.integers({0, 0}).reals({0.9});
  const std::string s = gen_numeric_label(cfg, one).text;
  CHECK(s == "\\lambda");
}

TEST_CASE("numeric: decimals stay in range with 0-3 fraction digits") {
  Rng rng(17);
  for (int i = 0; i < 10000; ++i) {
    const std::string s = gen_decimal(100000.0, rng);
    const double v = std::stod(s);
    CHECK(v >= 0.0);
    CHECK(v <= 100000.0);
    const auto dot = s.find('.');
    if (dot != std::string::npos) {
      CHECK(s.size() - dot - 1 >= 1);
      CHECK(s.size() - dot - 1 <= 3);
    }
  }
}

TEST_CASE("generators: totality, round trip, determinism") {
  const tex::CommandTable& table = tex::CommandTable::builtin();
  EnglishGenConfig ecfg;
  for (const auto& s : ecfg.symbol_inventory) CHECK_NOTHROW(tex::parse_label(s, table));
  for (const auto& s : ecfg.arg_command_inventory) CHECK(table.contains(s));
  for (const auto& s : NumericGenConfig{}.math_symbol_inventory) CHECK(table.contains(s));

  Rng a(77), b(77);
  std::set<char32_t> numeric_chars;
  for (int i = 0; i < 3000; ++i) {
    for (const LatexLabel& l : {gen_english_label(sample_corpus(), ecfg, a),
                                gen_chem_label(ChemGenConfig{}, a),
                                gen_numeric_label(NumericGenConfig{}, a)}) {
      CAPTURE(l.text);
      const tex::MathAst ast = tex::parse_label(l.text);
      CHECK(tex::parse_label(tex::serialize(ast)) == ast);
      if (l.kind == LabelKind::Numeric) {
        for (char32_t c : utf8::decode(l.text)) numeric_chars.insert(c);
      }
    }
    CHECK(gen_english_label(sample_corpus(), ecfg, b).text.size() >= 1);
    gen_chem_label(ChemGenConfig{}, b);
    gen_numeric_label(NumericGenConfig{}, b);
  }
  CHECK(numeric_chars.size() <= 60);

  Rng x(5), y(5);
  for (int i = 0; i < 200; ++i) {
    CHECK(gen_english_label(sample_corpus(), ecfg, x).text ==
          gen_english_label(sample_corpus(), ecfg, y).text);
  }
}

TEST_CASE("config validation") {
  EnglishGenConfig e;
  e.p1 = 1.5;
  CHECK_THROWS_AS(e.validate(), Error);
  e = EnglishGenConfig{};
  e.arg_command_inventory = {"\\pm"};
  CHECK_THROWS_AS(e.validate(), Error);
  e = EnglishGenConfig{};
  e.symbol_inventory = {"\\nosuch"};
  CHECK_THROWS_AS(e.validate(), Error);
  CHECK_NOTHROW(EnglishGenConfig{}.validate());
  ChemGenConfig c;
  c.conjoiners.clear();
  CHECK_THROWS_AS(c.validate(), Error);
  CHECK_NOTHROW(ChemGenConfig{}.validate());
  NumericGenConfig n;
  n.max_numerals = 0;
  CHECK_THROWS_AS(n.validate(), Error);
  CHECK_NOTHROW(NumericGenConfig{}.validate());
  CHECK(parse_trial_mode("per_word") == TrialMode::PerWord);
  CHECK_THROWS(parse_trial_mode("sometimes"));
}
