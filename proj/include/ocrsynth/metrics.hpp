// metrics.hpp - corpus-level BLEU-4, edit score and exact match.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ocrsynth {

enum class Tokenizer {
  Latex,       // \command is one token; every other non-space char is one token
  Whitespace,  // split on whitespace
  Char,        // every non-space Unicode scalar
};

const char* tokenizer_name(Tokenizer t);
Tokenizer parse_tokenizer(std::string_view name);

std::vector<std::string> tokenize(std::string_view text, Tokenizer mode);

/// Edit distance over Unicode scalar values (inputs are UTF-8).
std::size_t levenshtein(std::string_view a, std::string_view b);
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

struct EvalInput {
  std::vector<std::string> references;
  std::vector<std::string> hypotheses;
};

/// 100 * (1 - sum lev(r, h) / sum max(|r|, |h|)), after NFC. All-empty
/// inputs score 100.
double edit_score(const EvalInput& input);

struct BleuOptions {
  Tokenizer tokenizer = Tokenizer::Latex;
  /// Add-one smoothing of the 2..4-gram precisions.
  bool smoothing = false;
};

/// Corpus-level clipped n-gram counts, n = 1..4.
struct BleuStats {
  std::size_t matched[4] = {0, 0, 0, 0};
  std::size_t total[4] = {0, 0, 0, 0};
  std::size_t hyp_length = 0;
  std::size_t ref_length = 0;

  /// Modified precision for n in 1..4 (0 when there are no n-grams).
  double precision(std::size_t n) const;
};

BleuStats bleu_stats(const EvalInput& input, Tokenizer tokenizer);

/// Corpus BLEU with uniform weights over 1..4-grams and the brevity penalty,
/// scaled to [0, 100].
double bleu4(const EvalInput& input, const BleuOptions& options = {});

/// Percentage of pairs equal after NFC.
double exact_match(const EvalInput& input);

struct EvalReport {
  double bleu4 = 0;
  double edit = 0;
  double exact_match = 0;
  std::size_t n_records = 0;
  Tokenizer tokenizer = Tokenizer::Latex;
  bool smoothing = false;

  /// {"bleu4":..,"edit":..,"exact_match":..,"n_records":..,"tokenizer_mode":..}
  std::string to_json() const;
};

/// Throws Error(Input) when the lists differ in length or are empty.
EvalReport evaluate(const EvalInput& input, const BleuOptions& options = {});

}  // namespace ocrsynth
