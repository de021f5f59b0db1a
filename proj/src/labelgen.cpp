// labelgen.cpp

#include "ocrsynth/labelgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "ocrsynth/error.hpp"
#include "ocrsynth/tex/commands.hpp"
#include "ocrsynth/tex/parser.hpp"
#include "ocrsynth/utf8.hpp"

namespace ocrsynth {
namespace {

constexpr std::string_view kScriptAlphabet =
    "0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
constexpr std::string_view kLetters =
    "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";
constexpr std::string_view kDigits = "0123456789";

void require_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::Config, std::string(name) + " must be in [0, 1]");
  }
}

void require_commands(const std::vector<std::string>& tokens, const char* name) {
  for (const auto& t : tokens) {
    try {
      tex::parse_label(t);
    } catch (const Error& e) {
      throw Error(ErrorKind::Config,
                  std::string(name) + " entry '" + t + "' is not a valid label: " + e.what());
    }
  }
}

/// Bare argument-taking command such as "\bar" (as opposed to "\mathbb{R}").
bool needs_argument(const std::string& token) {
  const auto* info = tex::CommandTable::builtin().find(token);
  return info != nullptr && info->takes_argument();
}

std::string with_argument(const std::string& token, double english_prob,
                          RandomSource& rng) {
  const bool letter = rng.bernoulli(english_prob);
  const char c = letter ? rng.pick(kLetters) : rng.pick(kDigits);
  return token + "{" + c + "}";
}

/// Distinct indices from [0, n), in increasing order.
std::vector<std::size_t> distinct_indices(std::size_t n, std::size_t k,
                                          RandomSource& rng) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  k = std::min(k, n);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(n - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace

const char* label_kind_name(LabelKind kind) {
  switch (kind) {
    case LabelKind::English: return "english";
    case LabelKind::Chem: return "chem";
    case LabelKind::Numeric: return "numeric";
    case LabelKind::External: return "external";
  }
  return "?";
}

LabelKind parse_label_kind(std::string_view name) {
  for (LabelKind k : {LabelKind::English, LabelKind::Chem, LabelKind::Numeric,
                      LabelKind::External}) {
    if (name == label_kind_name(k)) return k;
  }
  throw Error(ErrorKind::Input, "unknown subset '" + std::string(name) + "'");
}

const char* trial_mode_name(TrialMode mode) {
  return mode == TrialMode::PerRecord ? "per_record" : "per_word";
}

TrialMode parse_trial_mode(std::string_view name) {
  if (name == "per_record") return TrialMode::PerRecord;
  if (name == "per_word") return TrialMode::PerWord;
  throw Error(ErrorKind::Config,
              "trial mode must be per_record or per_word, got '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// configs

std::vector<std::string> EnglishGenConfig::default_symbol_inventory() {
  return {"\\phi", "\\infty", "\\sum", "\\prod", "\\pm", "\\neq", "\\leq", "\\geq",
          "\\times", "\\lambda", "\\beta", "\\Psi", "\\mu", "\\alpha", "\\mathbb{R}"};
}

std::vector<std::string> EnglishGenConfig::default_arg_command_inventory() {
  return {"\\bar", "\\dot", "\\hat", "\\tilde"};
}

void EnglishGenConfig::validate() const {
  if (w < 1) throw Error(ErrorKind::Config, "english.w must be >= 1");
  if (max_breaks < 1) throw Error(ErrorKind::Config, "english.max_breaks must be >= 1");
  require_probability(p1, "english.p1");
  require_probability(p2, "english.p2");
  require_probability(p3, "english.p3");
  require_probability(p4, "english.p4");
  require_probability(arg_english_prob, "english.arg_english_prob");
  if (symbol_inventory.empty() && arg_command_inventory.empty() && p3 > 0) {
    throw Error(ErrorKind::Config, "english symbol inventories are empty but p3 > 0");
  }
  require_commands(symbol_inventory, "english.symbol_inventory");
  for (const auto& c : arg_command_inventory) {
    if (!needs_argument(c)) {
      throw Error(ErrorKind::Config,
                  "english.arg_command_inventory entry '" + c +
                      "' is not an argument-taking command");
    }
  }
}

std::vector<std::string> ChemGenConfig::iupac_element_symbols() {
  return {"H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
          "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
          "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
          "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
          "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
          "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
          "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
          "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm",
          "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs",
          "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};
}

void ChemGenConfig::validate() const {
  if (max_compounds < 1) throw Error(ErrorKind::Config, "chem.max_compounds must be >= 1");
  if (max_elements < 1) throw Error(ErrorKind::Config, "chem.max_elements must be >= 1");
  if (max_quantity < 1) throw Error(ErrorKind::Config, "chem.max_quantity must be >= 1");
  if (conjoiners.empty()) throw Error(ErrorKind::Config, "chem.conjoiners must not be empty");
  if (element_symbols.empty()) {
    throw Error(ErrorKind::Config, "chem.element_symbols must not be empty");
  }
  require_commands(conjoiners, "chem.conjoiners");
  require_commands(element_symbols, "chem.element_symbols");
}

std::vector<std::string> NumericGenConfig::default_math_symbol_inventory() {
  return {"\\lambda", "\\beta", "\\Psi", "\\mu",  "\\pi",   "\\nu",    "\\xi",
          "\\phi",    "\\chi",  "\\psi", "\\rho", "\\tau",  "\\eta",   "\\Pi",
          "\\Xi",     "\\Phi",  "\\alpha", "\\sigma", "\\omega", "\\Delta"};
}

void NumericGenConfig::validate() const {
  if (max_numerals < 1) throw Error(ErrorKind::Config, "numeric.max_numerals must be >= 1");
  require_probability(decimal_prob, "numeric.decimal_prob");
  if (!(decimal_max >= 0.0) || !std::isfinite(decimal_max)) {
    throw Error(ErrorKind::Config, "numeric.decimal_max must be a non-negative number");
  }
  if (joiners.empty()) throw Error(ErrorKind::Config, "numeric.joiners must not be empty");
  if (math_symbol_inventory.empty() && decimal_prob < 1.0) {
    throw Error(ErrorKind::Config, "numeric.math_symbol_inventory must not be empty");
  }
  require_commands(joiners, "numeric.joiners");
  require_commands(math_symbol_inventory, "numeric.math_symbol_inventory");
}

// ---------------------------------------------------------------------------
// english

std::optional<std::string> word_to_tex(std::string_view word,
                                       const std::function<bool(char32_t)>& renderable) {
  if (word.empty() || utf8::find_invalid(word) != std::string_view::npos) return std::nullopt;
  std::string out;
  for (char32_t c : utf8::decode(word)) {
    switch (c) {
      case U'%': case U'&': case U'#': case U'$': case U'_': case U'{': case U'}':
        out += '\\';
        out += static_cast<char>(c);
        continue;
      default:
        break;
    }
    if (!tex::is_run_char(c)) return std::nullopt;
    if (renderable && !renderable(c)) return std::nullopt;
    utf8::append(out, c);
  }
  return out;
}

std::vector<double> break_count_weights(std::size_t max_breaks) {
  std::vector<double> w(max_breaks);
  double total = 0;
  for (std::size_t i = 1; i <= max_breaks; ++i) {
    w[i - 1] = 1.0 / static_cast<double>(i * i);
    total += w[i - 1];
  }
  for (double& x : w) x /= total;
  return w;
}

std::string gen_script_content(RandomSource& rng) {
  const auto len = static_cast<std::size_t>(rng.uniform_int(1, 3));
  std::string out;
  for (std::size_t i = 0; i < len; ++i) out += rng.pick(kScriptAlphabet);
  return out;
}

std::string perturb_words(std::vector<std::string> words, const EnglishGenConfig& cfg,
                          RandomSource& rng, EnglishTrace* trace) {
  EnglishTrace local;
  EnglishTrace& t = trace ? *trace : local;
  t = EnglishTrace{};
  if (words.empty()) return {};

  // (1) scripts; superscripts are appended first so a word carrying both
  // reads word^{a}_{b}
  std::vector<std::string> sup(words.size()), sub(words.size());
  if (cfg.trial_mode == TrialMode::PerRecord) {
    if (rng.bernoulli(cfg.p1)) {
      t.superscript = true;
      const std::size_t i = rng.below(words.size());
      sup[i] = gen_script_content(rng);
    }
    if (rng.bernoulli(cfg.p2)) {
      t.subscript = true;
      const std::size_t i = rng.below(words.size());
      sub[i] = gen_script_content(rng);
    }
  } else {
    for (std::size_t i = 0; i < words.size(); ++i) {
      if (rng.bernoulli(cfg.p1)) sup[i] = gen_script_content(rng);
      if (rng.bernoulli(cfg.p2)) sub[i] = gen_script_content(rng);
    }
  }
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (!sup[i].empty()) {
      words[i] += "^{" + sup[i] + "}";
      ++t.superscripts;
    }
    if (!sub[i].empty()) {
      words[i] += "_{" + sub[i] + "}";
      ++t.subscripts;
    }
  }
  t.superscript = t.superscript || t.superscripts > 0;
  t.subscript = t.subscript || t.subscripts > 0;

  // (2) symbols, at one of the n+1 slots around the words
  const std::size_t inventory =
      cfg.symbol_inventory.size() + cfg.arg_command_inventory.size();
  auto draw_symbol = [&]() {
    const std::size_t i = rng.below(inventory);
    const std::string& token = i < cfg.symbol_inventory.size()
                                   ? cfg.symbol_inventory[i]
                                   : cfg.arg_command_inventory[i - cfg.symbol_inventory.size()];
    return needs_argument(token) ? with_argument(token, cfg.arg_english_prob, rng) : token;
  };
  std::vector<std::string> items;
  if (inventory > 0 && cfg.trial_mode == TrialMode::PerRecord) {
    items = std::move(words);
    if (rng.bernoulli(cfg.p3)) {
      const std::size_t slot = rng.below(items.size() + 1);
      items.insert(items.begin() + static_cast<std::ptrdiff_t>(slot), draw_symbol());
      t.symbols = 1;
    }
  } else if (inventory > 0) {
    for (std::size_t slot = 0; slot <= words.size(); ++slot) {
      if (rng.bernoulli(cfg.p3)) {
        items.push_back(draw_symbol());
        ++t.symbols;
      }
      if (slot < words.size()) items.push_back(std::move(words[slot]));
    }
  } else {
    items = std::move(words);
  }

  // (3) line breaks at distinct gaps
  std::vector<bool> break_after(items.size(), false);
  if (rng.bernoulli(cfg.p4)) {
    t.breaks_fired = true;
    const auto weights = break_count_weights(cfg.max_breaks);
    t.breaks_drawn = rng.weighted_index(weights) + 1;
    const auto gaps = distinct_indices(items.size() - 1, t.breaks_drawn, rng);
    t.breaks_inserted = gaps.size();
    for (std::size_t g : gaps) break_after[g] = true;
  }

  std::string out = items[0];
  for (std::size_t i = 1; i < items.size(); ++i) {
    out += break_after[i - 1] ? " \\\\ " : " ";
    out += items[i];
  }
  return out;
}

LatexLabel gen_english_label_traced(const Corpus& corpus, const EnglishGenConfig& cfg,
                                    RandomSource& rng, EnglishTrace& trace,
                                    const std::function<bool(char32_t)>& renderable) {
  SpanOptions opts;
  opts.length_weighted = cfg.length_weighted;
  opts.accept_word = [&](std::string_view w) { return word_to_tex(w, renderable).has_value(); };
  TextSample span = sample_span(corpus, rng, cfg.w, opts);
  std::vector<std::string> words;
  words.reserve(span.words.size());
  for (const auto& w : span.words) words.push_back(*word_to_tex(w, renderable));
  return {perturb_words(std::move(words), cfg, rng, &trace), LabelKind::English};
}

LatexLabel gen_english_label(const Corpus& corpus, const EnglishGenConfig& cfg,
                             RandomSource& rng,
                             const std::function<bool(char32_t)>& renderable) {
  EnglishTrace trace;
  return gen_english_label_traced(corpus, cfg, rng, trace, renderable);
}

// ---------------------------------------------------------------------------
// chem

std::string gen_compound(const ChemGenConfig& cfg, RandomSource& rng) {
  const auto n = rng.uniform_int(1, static_cast<std::int64_t>(cfg.max_elements));
  std::string out;
  for (std::int64_t i = 0; i < n; ++i) {
    out += rng.pick(cfg.element_symbols);
    const auto q = rng.uniform_int(1, static_cast<std::int64_t>(cfg.max_quantity));
    if (q > 1) out += "_{" + std::to_string(q) + "}";
  }
  return out;
}

LatexLabel gen_chem_label(const ChemGenConfig& cfg, RandomSource& rng) {
  const auto n = rng.uniform_int(1, static_cast<std::int64_t>(cfg.max_compounds));
  std::string out;
  for (std::int64_t i = 0; i < n; ++i) {
    if (i > 0) {
      out += ' ';
      out += rng.pick(cfg.conjoiners);
      out += ' ';
    }
    const std::string compound = gen_compound(cfg, rng);
    out += cfg.upright_compounds ? "\\mathrm{" + compound + "}" : compound;
  }
  return {out, LabelKind::Chem};
}

// ---------------------------------------------------------------------------
// numeric

std::string gen_decimal(double decimal_max, RandomSource& rng) {
  const int digits = static_cast<int>(rng.uniform_int(0, 3));
  const double value = rng.uniform_real(0.0, decimal_max);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

LatexLabel gen_numeric_label(const NumericGenConfig& cfg, RandomSource& rng) {
  const auto n = rng.uniform_int(1, static_cast<std::int64_t>(cfg.max_numerals));
  std::string out;
  for (std::int64_t i = 0; i < n; ++i) {
    if (i > 0) {
      out += ' ';
      out += rng.pick(cfg.joiners);
      out += ' ';
    }
    if (rng.bernoulli(cfg.decimal_prob)) {
      out += gen_decimal(cfg.decimal_max, rng);
    } else {
      out += rng.pick(cfg.math_symbol_inventory);
    }
  }
  return {out, LabelKind::Numeric};
}

}  // namespace ocrsynth
