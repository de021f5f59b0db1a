// metrics.cpp

#include "ocrsynth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <json.hpp>

#include "ocrsynth/error.hpp"
#include "ocrsynth/utf8.hpp"

namespace ocrsynth {
namespace {

bool is_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v';
}

bool is_ascii_letter(char32_t c) { return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z'); }

void check_parallel(const EvalInput& input) {
  if (input.references.size() != input.hypotheses.size()) {
    throw Error(ErrorKind::Input, "references (" + std::to_string(input.references.size()) +
                                      ") and hypotheses (" +
                                      std::to_string(input.hypotheses.size()) +
                                      ") differ in length");
  }
}

using Ngram = std::vector<std::string>;

std::map<Ngram, std::size_t> ngram_counts(const std::vector<std::string>& tokens, std::size_t n) {
  std::map<Ngram, std::size_t> counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[Ngram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                   tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

}  // namespace

const char* tokenizer_name(Tokenizer t) {
  switch (t) {
    case Tokenizer::Latex: return "latex";
    case Tokenizer::Whitespace: return "whitespace";
    case Tokenizer::Char: return "char";
  }
  return "?";
}

Tokenizer parse_tokenizer(std::string_view name) {
  for (Tokenizer t : {Tokenizer::Latex, Tokenizer::Whitespace, Tokenizer::Char}) {
    if (name == tokenizer_name(t)) return t;
  }
  throw Error(ErrorKind::Config,
              "tokenizer must be latex, whitespace or char, got '" + std::string(name) + "'");
}

std::vector<std::string> tokenize(std::string_view text, Tokenizer mode) {
  const std::u32string s = utf8::decode(text);
  std::vector<std::string> out;
  if (mode == Tokenizer::Whitespace) {
    std::string cur;
    for (char32_t c : s) {
      if (is_space(c)) {
        if (!cur.empty()) out.push_back(std::move(cur));
        cur.clear();
      } else {
        utf8::append(cur, c);
      }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (is_space(s[i])) continue;
    if (mode == Tokenizer::Latex && s[i] == U'\\' && i + 1 < s.size()) {
      std::size_t j = i + 1;
      if (is_ascii_letter(s[j])) {
        while (j < s.size() && is_ascii_letter(s[j])) ++j;
      } else {
        ++j;  // \\, \{, \% ...
      }
      out.push_back(utf8::encode(std::u32string_view(s).substr(i, j - i)));
      i = j - 1;
      continue;
    }
    out.push_back(utf8::encode(s[i]));
  }
  return out;
}

std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  // strip the common prefix and suffix; they never contribute edits
  while (!a.empty() && !b.empty() && a.front() == b.front()) {
    a.remove_prefix(1);
    b.remove_prefix(1);
  }
  while (!a.empty() && !b.empty() && a.back() == b.back()) {
    a.remove_suffix(1);
    b.remove_suffix(1);
  }
  if (a.size() < b.size()) std::swap(a, b);
  if (b.empty()) return a.size();
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

std::size_t levenshtein(std::string_view a, std::string_view b) {
  return levenshtein(std::u32string_view(utf8::decode(a)), std::u32string_view(utf8::decode(b)));
}

double edit_score(const EvalInput& input) {
  check_parallel(input);
  std::size_t distance = 0, length = 0;
  for (std::size_t i = 0; i < input.references.size(); ++i) {
    const std::u32string r = utf8::decode(utf8::nfc(input.references[i]));
    const std::u32string h = utf8::decode(utf8::nfc(input.hypotheses[i]));
    distance += levenshtein(r, h);
    length += std::max(r.size(), h.size());
  }
  if (length == 0) return 100.0;
  return 100.0 * (1.0 - static_cast<double>(distance) / static_cast<double>(length));
}

double BleuStats::precision(std::size_t n) const {
  if (n < 1 || n > 4) throw Error(ErrorKind::Contract, "n-gram order must be 1..4");
  return total[n - 1] == 0 ? 0.0
                           : static_cast<double>(matched[n - 1]) /
                                 static_cast<double>(total[n - 1]);
}

BleuStats bleu_stats(const EvalInput& input, Tokenizer tokenizer) {
  check_parallel(input);
  BleuStats st;
  for (std::size_t i = 0; i < input.references.size(); ++i) {
    const auto ref = tokenize(utf8::nfc(input.references[i]), tokenizer);
    const auto hyp = tokenize(utf8::nfc(input.hypotheses[i]), tokenizer);
    st.hyp_length += hyp.size();
    st.ref_length += ref.size();
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto hc = ngram_counts(hyp, n);
      const auto rc = ngram_counts(ref, n);
      for (const auto& [gram, count] : hc) {
        const auto it = rc.find(gram);
        st.matched[n - 1] += it == rc.end() ? 0 : std::min(count, it->second);
        st.total[n - 1] += count;
      }
    }
  }
  return st;
}

double bleu4(const EvalInput& input, const BleuOptions& options) {
  const BleuStats st = bleu_stats(input, options.tokenizer);
  if (st.hyp_length == 0) return 0.0;
  double log_sum = 0;
  for (std::size_t n = 0; n < 4; ++n) {
    double m = static_cast<double>(st.matched[n]);
    double t = static_cast<double>(st.total[n]);
    if (options.smoothing && n > 0) {
      m += 1;
      t += 1;
    }
    if (m == 0 || t == 0) return 0.0;
    log_sum += 0.25 * std::log(m / t);
  }
  const double c = static_cast<double>(st.hyp_length);
  const double r = static_cast<double>(st.ref_length);
  const double bp = c > r ? 1.0 : std::exp(1.0 - r / c);
  return std::clamp(100.0 * bp * std::exp(log_sum), 0.0, 100.0);
}

double exact_match(const EvalInput& input) {
  check_parallel(input);
  if (input.references.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < input.references.size(); ++i) {
    hits += utf8::nfc(input.references[i]) == utf8::nfc(input.hypotheses[i]) ? 1 : 0;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(input.references.size());
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json j;
  j["bleu4"] = bleu4;
  j["edit"] = edit;
  j["exact_match"] = exact_match;
  j["n_records"] = n_records;
  j["tokenizer_mode"] = tokenizer_name(tokenizer);
  j["bleu_smoothing"] = smoothing;
  return j.dump();
}

EvalReport evaluate(const EvalInput& input, const BleuOptions& options) {
  check_parallel(input);
  if (input.references.empty()) throw Error(ErrorKind::Input, "evaluation needs at least one record");
  EvalReport r;
  r.bleu4 = bleu4(input, options);
  r.edit = edit_score(input);
  r.exact_match = exact_match(input);
  r.n_records = input.references.size();
  r.tokenizer = options.tokenizer;
  r.smoothing = options.smoothing;
  return r;
}

}  // namespace ocrsynth
