// test_corpus.cpp

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ocrsynth/corpus.hpp"
#include "ocrsynth/error.hpp"
#include "ocrsynth/resources.hpp"

using namespace ocrsynth;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("ocrsynth_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("load_corpus: line per document") {
  std::istringstream one("the quick brown fox");
  const Corpus c = load_corpus(one);
  CHECK(c.documents().size() == 1);
  CHECK(c.total_words() == 4);

  std::istringstream blank("\n  \na b\n");
  const Corpus d = load_corpus(blank);
  CHECK(d.documents().size() == 1);
  CHECK(d.total_words() == 2);
  CHECK(d.dropped_documents() == 2);
  CHECK(d.documents()[0].words == std::vector<std::string>{"a", "b"});
}

TEST_CASE("load_corpus: file per document") {
  const fs::path dir = scratch_dir("files");
  write_file(dir / "a.txt", "one two three four five");
  write_file(dir / "b.txt", "1 2 3 4 5 6 7");
  write_file(dir / "c.txt", "k l m n o p q r s t u\n");
  write_file(dir / "ignored.md", "not a document");
  const Corpus c = load_corpus(dir, CorpusFormat::FilePerDocument);
  CHECK(c.documents().size() == 3);
  CHECK(c.total_words() == 23);
  fs::remove_all(dir);
}

TEST_CASE("load_corpus: errors") {
  std::istringstream empty("\n\n");
  CHECK_THROWS_AS(load_corpus(empty), Error);
  std::istringstream bad(std::string("ok\nab\xff" "cd\n"));
  try {
    load_corpus(bad);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Input);
    CHECK(std::string(e.what()).find("byte offset 5") != std::string::npos);
  }
  try {
    std::istringstream blank("   ");
    load_corpus(blank);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyCorpus);
  }
}

TEST_CASE("tokenize keeps punctuation attached") {
  CHECK(tokenize_words("  Hello, world!\tx\r\n") ==
        std::vector<std::string>{"Hello,", "world!", "x"});
}

TEST_CASE("sample_span: bounds and suffix behaviour") {
  const Corpus c = corpus_from_texts({"a b c"});
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const TextSample s = sample_span(c, rng, 10);
    REQUIRE(!s.words.empty());
    const std::vector<std::string> full{"a", "b", "c"};
    CHECK(std::equal(s.words.rbegin(), s.words.rend(), full.rbegin()));
  }
  ScriptedDraws start0;
  start0.integers({0, 0});
  CHECK(sample_span(c, start0, 10).words == std::vector<std::string>{"a", "b", "c"});

  const Corpus single = corpus_from_texts({"lonely"});
  for (std::size_t w : {1u, 3u, 10u}) {
    CHECK(sample_span(single, rng, w).words == std::vector<std::string>{"lonely"});
  }
}

TEST_CASE("sample_span: never crosses documents") {
  const Corpus c = corpus_from_texts({"a1 a2 a3 a4", "b1 b2", "c1 c2 c3 c4 c5 c6"});
  for (bool weighted : {false, true}) {
    SpanOptions opts;
    opts.length_weighted = weighted;
    Rng rng(7);
    for (int i = 0; i < 2000; ++i) {
      const TextSample s = sample_span(c, rng, 3, opts);
      CHECK(s.words.size() >= 1);
      CHECK(s.words.size() <= 3);
      for (const auto& w : s.words) CHECK(w[0] == s.words[0][0]);
    }
  }
}

TEST_CASE("sample_span: uniform start indices (chi-square)") {
  std::string text;
  const int n = 1000;
  for (int i = 0; i < n; ++i) text += "w" + std::to_string(i) + " ";
  const Corpus c = corpus_from_texts({text});
  std::vector<double> counts(n, 0.0);
  Rng rng(12345);
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) {
    const TextSample s = sample_span(c, rng, 10);
    counts[static_cast<std::size_t>(std::stoi(s.words[0].substr(1)))] += 1;
  }
  const double expected = static_cast<double>(draws) / n;
  double chi2 = 0;
  for (double k : counts) chi2 += (k - expected) * (k - expected) / expected;
  // 999 degrees of freedom; normal approximation at the 0.9995 quantile
  const double dof = n - 1;
  CHECK(chi2 < dof + 3.29 * std::sqrt(2 * dof));
}

TEST_CASE("sample_span: rejected words trigger resampling") {
  const Corpus c = corpus_from_texts({"good words", "bad"});
  SpanOptions opts;
  opts.accept_word = [](std::string_view w) { return w != "bad"; };
  Rng rng(3);
  for (int i = 0; i < 200; ++i) CHECK(sample_span(c, rng, 5, opts).source_doc != c.documents()[1].id);

  const Corpus all_bad = corpus_from_texts({"bad"});
  CHECK_THROWS_AS(sample_span(all_bad, rng, 5, opts), Error);
}

TEST_CASE("sample_span: deterministic for a fixed seed") {
  const Corpus c = corpus_from_texts({"a b c d e f g", "h i j k"});
  Rng r1(99), r2(99);
  for (int i = 0; i < 100; ++i) CHECK(sample_span(c, r1, 4).words == sample_span(c, r2, 4).words);
}

TEST_CASE("bundled sample corpus loads") {
  const Corpus c = load_corpus(data_dir() / "corpus" / "sample.txt", CorpusFormat::LinePerDocument);
  CHECK(c.documents().size() >= 30);
  CHECK(c.total_words() > 4000);
}
