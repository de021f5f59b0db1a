// labelgen.hpp - stochastic ground-truth label generators (printed English,
// pseudo-chemical equations, numeric records).

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ocrsynth/corpus.hpp"
#include "ocrsynth/random.hpp"

namespace ocrsynth {

enum class LabelKind { English, Chem, Numeric, External };

const char* label_kind_name(LabelKind kind);
LabelKind parse_label_kind(std::string_view name);

/// Math-mode text without surrounding '$' delimiters.
struct LatexLabel {
  std::string text;
  LabelKind kind = LabelKind::English;
};

/// How p1/p2/p3 are applied: one trial per record (one word modified on
/// success) or one trial per word / gap.
enum class TrialMode { PerRecord, PerWord };

const char* trial_mode_name(TrialMode mode);
TrialMode parse_trial_mode(std::string_view name);

struct EnglishGenConfig {
  std::size_t w = 10;
  double p1 = 0.0375;  // superscript
  double p2 = 0.0125;  // subscript
  double p3 = 0.15;    // symbol insertion
  double p4 = 0.15;    // line breaks
  std::size_t max_breaks = 4;
  double arg_english_prob = 0.5;
  std::vector<std::string> symbol_inventory = default_symbol_inventory();
  std::vector<std::string> arg_command_inventory = default_arg_command_inventory();
  TrialMode trial_mode = TrialMode::PerRecord;
  bool length_weighted = false;

  static std::vector<std::string> default_symbol_inventory();
  static std::vector<std::string> default_arg_command_inventory();

  /// Throws Error(Config).
  void validate() const;
};

struct ChemGenConfig {
  std::size_t max_compounds = 4;
  std::size_t max_elements = 4;
  std::size_t max_quantity = 500;
  std::vector<std::string> conjoiners = {"+", "with", "and", "plus"};
  std::vector<std::string> element_symbols = iupac_element_symbols();
  /// Wrap each compound in \mathrm{...} (upright chemistry convention).
  bool upright_compounds = true;

  static std::vector<std::string> iupac_element_symbols();

  void validate() const;
};

struct NumericGenConfig {
  std::size_t max_numerals = 4;
  double decimal_prob = 0.5;
  double decimal_max = 100000.0;
  std::vector<std::string> joiners = {"+", "\\pm", "\\neq"};
  std::vector<std::string> math_symbol_inventory = default_math_symbol_inventory();

  static std::vector<std::string> default_math_symbol_inventory();

  void validate() const;
};

/// Which perturbations fired while building one English label.
struct EnglishTrace {
  bool superscript = false;  // per-record mode: the p1 trial succeeded
  bool subscript = false;
  std::size_t superscripts = 0;
  std::size_t subscripts = 0;
  std::size_t symbols = 0;
  bool breaks_fired = false;
  std::size_t breaks_drawn = 0;     // k before clamping to the gap count
  std::size_t breaks_inserted = 0;  // after clamping
};

/// Canonical form of a corpus word inside a label: LaTeX specials that have
/// an escape (% & # $ _ { }) are escaped. Returns nullopt for words that
/// cannot be expressed (containing \ ^ ~ or characters `renderable` rejects).
std::optional<std::string> word_to_tex(std::string_view word,
                                       const std::function<bool(char32_t)>& renderable = {});

/// P(k = i) for i in 1..max_breaks, proportional to 1/i^2.
std::vector<double> break_count_weights(std::size_t max_breaks);

/// Letters/digits fragment of length 1-3 (unbraced).
std::string gen_script_content(RandomSource& rng);

LatexLabel gen_english_label(const Corpus& corpus, const EnglishGenConfig& cfg,
                             RandomSource& rng,
                             const std::function<bool(char32_t)>& renderable = {});
LatexLabel gen_english_label_traced(const Corpus& corpus, const EnglishGenConfig& cfg,
                                    RandomSource& rng, EnglishTrace& trace,
                                    const std::function<bool(char32_t)>& renderable = {});

/// The perturbation steps on an already-sampled span (words already in TeX
/// form). Exposed so that fixed spans can be tested directly.
std::string perturb_words(std::vector<std::string> words, const EnglishGenConfig& cfg,
                          RandomSource& rng, EnglishTrace* trace = nullptr);

std::string gen_compound(const ChemGenConfig& cfg, RandomSource& rng);
LatexLabel gen_chem_label(const ChemGenConfig& cfg, RandomSource& rng);

/// Decimal in [0, max] with 0-3 fractional digits.
std::string gen_decimal(double decimal_max, RandomSource& rng);
LatexLabel gen_numeric_label(const NumericGenConfig& cfg, RandomSource& rng);

}  // namespace ocrsynth
