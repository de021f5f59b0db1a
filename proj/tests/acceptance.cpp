// acceptance.cpp - end-to-end acceptance checks, one PASS/FAIL line each.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <string>

#include "oracles.hpp"
#include "ocrsynth/dataset.hpp"
#include "ocrsynth/error.hpp"
#include "ocrsynth/labelgen.hpp"
#include "ocrsynth/metrics.hpp"
#include "ocrsynth/png_io.hpp"
#include "ocrsynth/resources.hpp"
#include "ocrsynth/tex/parser.hpp"
#include "ocrsynth/transforms.hpp"
#include "ocrsynth/utf8.hpp"

using namespace ocrsynth;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %d %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[1024];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// two-sided 99% normal interval for a binomial proportion
bool in_ci99(std::size_t hits, std::size_t n, double p) {
  const double half = 2.5758 * std::sqrt(p * (1 - p) / static_cast<double>(n));
  return std::abs(static_cast<double>(hits) / static_cast<double>(n) - p) <= half;
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("ocrsynth_accept_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void criterion_1() {
  const auto t0 = Clock::now();
  Rng rng(101);
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const std::u32string a = oracle::random_unicode(rng, 30), b = oracle::random_unicode(rng, 30);
    if (levenshtein(a, b) != oracle::levenshtein(a, b)) ++mismatches;
  }
  const double single = edit_score({{"abc"}, {"abd"}});
  const double pair = edit_score({{"ab", "cd"}, {"ab", "ce"}});
  const double secs = seconds_since(t0);
  const bool ok = mismatches == 0 && near(single, 100.0 * (1 - 1.0 / 3), 0.005) &&
                  near(single, 66.67, 0.005) && near(pair, 75.0, 0.005) && secs < 10;
  report(1, "metric oracle equivalence", ok,
         fmt("%zu/1000 DP mismatches, edit(abc,abd)=%.2f, two-pair=%.2f, %.2fs", mismatches,
             single, pair, secs));
}

void criterion_2() {
  const EvalInput same{{"x^{2} + y", "\\alpha"}, {"x^{2} + y", "\\alpha"}};
  const double identical = bleu4(same);
  const double empty = bleu4({{"a b c", "d e"}, {"", ""}});
  const BleuOptions ws{Tokenizer::Whitespace, false};
  const double five = bleu4({{"a b c d e"}, {"a b c d x"}}, ws);
  const double five_oracle = 100 * std::pow(4.0 / 5 * 3.0 / 4 * 2.0 / 3 * 1.0 / 2, 0.25);
  // hypothesis is a 6-token prefix of an 8-token reference: every precision is 1
  const double short_hyp = bleu4({{"a b c d e f g h"}, {"a b c d e f"}}, ws);
  const double bp = 100 * std::exp(1 - 8.0 / 6.0);
  const bool ok = identical == 100.0 && empty == 0.0 && near(five, 66.87, 0.01) &&
                  near(five, five_oracle, 1e-9) && near(short_hyp, bp, 1e-9);
  report(2, "BLEU-4 correctness", ok,
         fmt("identical=%.2f empty=%.2f five-token=%.4f brevity=%.4f (closed form %.4f)",
             identical, empty, five, short_hyp, bp));
}

void criterion_3() {
  const auto t0 = Clock::now();
  Rng rng(303);
  const ChemGenConfig chem;
  const NumericGenConfig numeric;
  double chem_total = 0, num_total = 0;
  std::set<char32_t> num_chars;
  const int n = 10000;
  for (int i = 0; i < n; ++i) chem_total += utf8::length(gen_chem_label(chem, rng).text);
  for (int i = 0; i < n; ++i) {
    const std::string label = gen_numeric_label(numeric, rng).text;
    num_total += utf8::length(label);
    for (char32_t c : utf8::decode(label)) num_chars.insert(c);
  }
  const double chem_mean = chem_total / n, num_mean = num_total / n;
  const double secs = seconds_since(t0);
  const bool ok = std::abs(chem_mean / 78.72 - 1) <= 0.15 &&
                  std::abs(num_mean / 18.83 - 1) <= 0.20 && num_chars.size() <= 60 && secs < 60;
  report(3, "generator statistics vs reported table", ok,
         fmt("chem mean %.2f (78.72 +-15%%), numeric mean %.2f (18.83 +-20%%), numeric unique "
             "%zu (<=60), %.2fs",
             chem_mean, num_mean, num_chars.size(), secs));
}

void criterion_4() {
  const Corpus corpus = load_corpus(data_dir() / "corpus" / "sample.txt", CorpusFormat::LinePerDocument);
  EnglishGenConfig cfg;  // defaults: p4 = 0.15
  Rng rng(404);
  const std::size_t n = 100000;
  std::size_t sup = 0, sub = 0, sym = 0, with_breaks = 0, fired = 0;
  std::size_t by_count[5] = {0, 0, 0, 0, 0};  // from the label text
  std::size_t drawn[5] = {0, 0, 0, 0, 0};     // generator's k before clamping
  for (std::size_t i = 0; i < n; ++i) {
    EnglishTrace trace;
    const std::string label = gen_english_label_traced(corpus, cfg, rng, trace).text;
    sup += trace.superscript;
    sub += trace.subscript;
    sym += trace.symbols > 0;
    std::size_t k = 0;
    for (std::size_t p = label.find(" \\\\ "); p != std::string::npos;
         p = label.find(" \\\\ ", p + 1)) {
      ++k;
    }
    if (k > 0) {
      ++with_breaks;
      ++by_count[std::min<std::size_t>(k, 4)];
    }
    if (trace.breaks_fired) {
      ++fired;
      ++drawn[trace.breaks_drawn];
    }
  }
  double z = 0;
  for (int i = 1; i <= 4; ++i) z += 1.0 / (i * i);
  bool dist_ok = true;
  std::string dist;
  for (int i = 1; i <= 4; ++i) {
    const double expect = 1.0 / (i * i) / z;
    const double got = static_cast<double>(by_count[i]) / static_cast<double>(with_breaks);
    dist_ok = dist_ok && std::abs(got - expect) <= 0.02;
    dist += fmt("%s%.4f", i > 1 ? "/" : "", got);
  }
  const bool ok = in_ci99(with_breaks, n, cfg.p4) && dist_ok && in_ci99(sup, n, cfg.p1) &&
                  in_ci99(sub, n, cfg.p2) && in_ci99(sym, n, cfg.p3);
  report(4, "stochastic-law conformance", ok,
         fmt("breaks %.4f (trials %.4f), counts %s (drawn %.4f/%.4f/%.4f/%.4f), sup %.4f, "
             "sub %.4f, sym %.4f over %zu labels",
             with_breaks / double(n), fired / double(n), dist.c_str(), drawn[1] / double(fired),
             drawn[2] / double(fired), drawn[3] / double(fired), drawn[4] / double(fired),
             sup / double(n), sub / double(n), sym / double(n), n));
}

void criterion_5() {
  const DatasetPlan plan;
  const tex::FontSet fonts = load_fonts(plan.render);
  const Corpus corpus = load_corpus(data_dir() / "corpus" / "sample.txt", CorpusFormat::LinePerDocument);
  const auto renderable = [&](char32_t c) { return fonts.renderable(c); };
  Rng rng(505);
  std::size_t parse_fail = 0, render_fail = 0, roundtrip_fail = 0, overflow = 0, total = 0;
  std::string first_error;
  const std::function<LatexLabel()> gens[3] = {
      [&] { return gen_english_label(corpus, plan.english, rng, renderable); },
      [&] { return gen_chem_label(plan.chem, rng); },
      [&] { return gen_numeric_label(plan.numeric, rng); }};
  for (const auto& gen : gens) {
    for (int i = 0; i < 10000; ++i, ++total) {
      const std::string label = gen().text;
      tex::MathAst ast;
      try {
        ast = tex::parse_label(label);
      } catch (const Error& e) {
        ++parse_fail;
        if (first_error.empty()) first_error = label + ": " + e.what();
        continue;
      }
      try {
        if (tex::parse_label(tex::serialize(ast)) != ast) ++roundtrip_fail;
      } catch (const Error&) {
        ++roundtrip_fail;
      }
      const auto style = plan.render.style(rng.below(fonts.font_count()), rng.below(fonts.size_count()));
      try {
        tex::rasterize(ast, style, fonts);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::TextOverflow) {
          ++overflow;  // resolved by the builder's retry, not a renderer failure
        } else {
          ++render_fail;
          if (first_error.empty()) first_error = label + ": " + e.what();
        }
      }
    }
  }
  const bool ok = parse_fail == 0 && render_fail == 0 && roundtrip_fail == 0;
  report(5, "grammar totality and round-trip", ok,
         fmt("%zu labels: %zu parse, %zu render, %zu round-trip failures (%zu canvas "
             "overflows retried by the builder)%s%s",
             total, parse_fail, render_fail, roundtrip_fail, overflow,
             first_error.empty() ? "" : "; first: ", first_error.c_str()));
}

void criterion_6() {
  Rng rng(606);
  std::size_t oracle_mismatch = 0, monotone_fail = 0;
  for (int n = 1; n <= 3; ++n) {
    for (int i = 0; i < 100; ++i) {
      const RasterImage img = oracle::random_binary(rng, 64, 64, 0.1);
      const RasterImage fast = bold(img, n);
      if (fast.pixels != oracle::bold(img, n).pixels) ++oracle_mismatch;
      for (std::size_t p = 0; p < img.pixels.size(); ++p) {
        if (img.pixels[p] == 0 && fast.pixels[p] != 0) {
          ++monotone_fail;
          break;
        }
      }
    }
  }
  std::size_t identity_fail = 0, pad_fail = 0;
  for (int i = 0; i < 50; ++i) {
    RasterImage img(37 + i, 23);
    for (auto& p : img.pixels) p = static_cast<std::uint8_t>(rng.below(256));
    if (pixelate(img, 1.0).pixels != img.pixels) ++identity_fail;
    const RasterImage bin = binarize(img);
    if (oracle::black_count(pad(bin, rng, 40)) != oracle::black_count(bin)) ++pad_fail;
  }
  const bool ok = oracle_mismatch == 0 && monotone_fail == 0 && identity_fail == 0 && pad_fail == 0;
  report(6, "transform oracle and properties", ok,
         fmt("bold oracle mismatches %zu/300, monotonicity violations %zu, pixelate(1) "
             "non-identity %zu/50, padding ink changes %zu/50",
             oracle_mismatch, monotone_fail, identity_fail, pad_fail));
}

void criterion_7() {
  const auto t0 = Clock::now();
  DatasetPlan plan;
  plan.seed = 7;
  plan.counts = {1000, 500, 500};
  const fs::path a = scratch("e2e_a"), b = scratch("e2e_b");
  plan.output_root = a.string();
  const BuildResult ra = build_dataset(plan, {1, {}});
  plan.output_root = b.string();
  const BuildResult rb = build_dataset(plan, {2, {}});
  std::size_t differing = 0;
  for (const auto& e : ra.manifest.entries) {
    if (slurp(a / e.image_path) != slurp(b / e.image_path)) ++differing;
  }
  const double secs = seconds_since(t0);
  const bool ok = ra.manifest_sha256 == rb.manifest_sha256 &&
                  slurp(a / "manifest.jsonl") == slurp(b / "manifest.jsonl") && differing == 0 &&
                  ra.manifest.entries.size() == 2000 && secs < 600;
  report(7, "end-to-end determinism", ok,
         fmt("manifest %s at jobs=1 and %s at jobs=2, %zu/%zu images differ, %.1fs",
             ra.manifest_sha256.substr(0, 12).c_str(), rb.manifest_sha256.substr(0, 12).c_str(),
             differing, ra.manifest.entries.size(), secs));
  fs::remove_all(a);
  fs::remove_all(b);
}

void criterion_8() {
  const SplitRatios ratios;
  const std::size_t n = 100000;
  std::size_t counts[3] = {0, 0, 0};
  std::set<std::string> seen[3];
  std::size_t unstable = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string id = record_id(static_cast<LabelKind>(i % 3), i);
    const Split s = assign_split(id, ratios, 8);
    if (assign_split(id, ratios, 8) != s) ++unstable;
    ++counts[static_cast<int>(s)];
    seen[static_cast<int>(s)].insert(id);
  }
  std::size_t overlap = 0;
  for (int x = 0; x < 3; ++x)
    for (int y = x + 1; y < 3; ++y)
      for (const auto& id : seen[x]) overlap += seen[y].count(id);
  const double f[3] = {counts[0] / double(n), counts[1] / double(n), counts[2] / double(n)};
  const bool ok = overlap == 0 && unstable == 0 && std::abs(f[0] - 0.9) <= 0.005 &&
                  std::abs(f[1] - 0.05) <= 0.005 && std::abs(f[2] - 0.05) <= 0.005;
  report(8, "split integrity", ok,
         fmt("train %.4f dev %.4f test %.4f over %zu ids, %zu overlaps", f[0], f[1], f[2], n,
             overlap));
}

void criterion_9() {
  const fs::path dir = scratch("external");
  fs::create_directories(dir / "images");
  std::ofstream labels(dir / "labels.txt");
  for (int i = 0; i < 20; ++i) {
    const int width = i == 13 ? 800 : 120 + 30 * i;  // the rest stay <= 700
    write_png(dir / "images" / (std::to_string(i) + ".png"), RasterImage(width, 48));
    labels << "x_{" << i << "}\n";
  }
  labels.close();
  const Manifest m = load_external(dir / "images", dir / "labels.txt");
  std::size_t excluded = 0;
  std::string which;
  for (const auto& e : m.entries) {
    if (e.excluded_from_eval) {
      ++excluded;
      which = e.id;
    }
  }
  const bool ok = m.entries.size() == 20 && excluded == 1 && which == "external-13";
  report(9, "external ingestion", ok,
         fmt("%zu records loaded, %zu excluded from eval (%s)", m.entries.size(), excluded,
             which.c_str()));
  fs::remove_all(dir);
}

}  // namespace

int main() {
  const std::pair<int, std::function<void()>> checks[] = {
      {1, criterion_1}, {2, criterion_2}, {3, criterion_3}, {4, criterion_4}, {5, criterion_5},
      {6, criterion_6}, {7, criterion_7}, {8, criterion_8}, {9, criterion_9}};
  for (const auto& [id, run] : checks) {
    try {
      run();
    } catch (const std::exception& e) {
      report(id, "criterion", false, std::string("exception: ") + e.what());
    }
  }
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
