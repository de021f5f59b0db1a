// corpus.hpp - plain-text corpora and consecutive-word span sampling.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "ocrsynth/random.hpp"

namespace ocrsynth {

struct Document {
  std::string id;
  std::vector<std::string> words;  // non-empty, no empty tokens
};

enum class CorpusFormat { LinePerDocument, FilePerDocument };

CorpusFormat parse_corpus_format(std::string_view tag);
const char* corpus_format_name(CorpusFormat format);

/// Immutable after construction; safe for concurrent reads.
class Corpus {
 public:
  Corpus() = default;
  /// Documents with zero words are dropped and counted.
  explicit Corpus(std::vector<Document> documents);

  const std::vector<Document>& documents() const { return documents_; }
  std::size_t total_words() const { return total_words_; }
  std::size_t dropped_documents() const { return dropped_; }
  bool empty() const { return documents_.empty(); }

  /// Index of the document containing the global word index (0-based).
  std::size_t document_of_word(std::size_t word_index) const;
  /// Global index of the first word of a document.
  std::size_t first_word(std::size_t doc_index) const {
    return word_offsets_[doc_index];
  }

 private:
  std::vector<Document> documents_;
  std::vector<std::size_t> word_offsets_;  // prefix sums, size = docs + 1
  std::size_t total_words_ = 0;
  std::size_t dropped_ = 0;
};

/// Splits on ASCII whitespace; punctuation stays attached.
std::vector<std::string> tokenize_words(std::string_view text);

/// One document per line. Throws Error(Input) on invalid UTF-8 (naming the
/// byte offset) and Error(EmptyCorpus) when nothing survives filtering.
Corpus load_corpus(std::istream& in, std::string_view source_name = "<stream>");

/// `path` is a text file (LinePerDocument) or a directory of .txt files
/// (FilePerDocument, sorted by filename for reproducibility).
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format);

/// Each string becomes one document.
Corpus corpus_from_texts(const std::vector<std::string>& texts);

struct TextSample {
  std::vector<std::string> words;
  std::string source_doc;
};

struct SpanOptions {
  bool length_weighted = false;
  /// Spans containing a rejected word are resampled.
  std::function<bool(std::string_view)> accept_word;
  std::size_t max_retries = 64;
};

/// Picks a document (uniformly, or by length when length_weighted), a start
/// index uniformly, and returns up to max_words consecutive words.
TextSample sample_span(const Corpus& corpus, RandomSource& rng,
                       std::size_t max_words, const SpanOptions& options = {});

}  // namespace ocrsynth
