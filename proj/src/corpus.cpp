// corpus.cpp

#include "ocrsynth/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ocrsynth/error.hpp"
#include "ocrsynth/utf8.hpp"

namespace ocrsynth {
namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in), {});
}

void check_utf8(std::string_view text, std::string_view source,
                std::size_t base_offset) {
  const std::size_t bad = utf8::find_invalid(text);
  if (bad != std::string_view::npos) {
    throw Error(ErrorKind::Input, "invalid UTF-8 in " + std::string(source) +
                                      " at byte offset " +
                                      std::to_string(base_offset + bad));
  }
}

Corpus require_nonempty(Corpus corpus, std::string_view source) {
  if (corpus.empty()) {
    throw Error(ErrorKind::EmptyCorpus,
                "corpus " + std::string(source) + " has no words after filtering");
  }
  return corpus;
}

}  // namespace

CorpusFormat parse_corpus_format(std::string_view tag) {
  if (tag == "lines" || tag == "one-document-per-line") {
    return CorpusFormat::LinePerDocument;
  }
  if (tag == "files" || tag == "one-document-per-file") {
    return CorpusFormat::FilePerDocument;
  }
  throw Error(ErrorKind::Config, "unknown corpus format '" + std::string(tag) +
                                     "' (expected lines|files)");
}

const char* corpus_format_name(CorpusFormat format) {
  return format == CorpusFormat::LinePerDocument ? "lines" : "files";
}

Corpus::Corpus(std::vector<Document> documents) {
  word_offsets_.push_back(0);
  for (auto& doc : documents) {
    if (doc.words.empty()) {
      ++dropped_;
      continue;
    }
    total_words_ += doc.words.size();
    word_offsets_.push_back(total_words_);
    documents_.push_back(std::move(doc));
  }
}

std::size_t Corpus::document_of_word(std::size_t word_index) const {
  auto it = std::upper_bound(word_offsets_.begin(), word_offsets_.end(),
                             word_index);
  return static_cast<std::size_t>(std::distance(word_offsets_.begin(), it)) - 1;
}

std::vector<std::string> tokenize_words(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) words.emplace_back(text.substr(start, i - start));
  }
  return words;
}

Corpus load_corpus(std::istream& in, std::string_view source_name) {
  std::vector<Document> docs;
  std::string line;
  std::size_t offset = 0;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    check_utf8(line, source_name, offset);
    offset += line.size() + 1;
    docs.push_back({std::string(source_name) + ":" + std::to_string(line_no++),
                    tokenize_words(line)});
  }
  return require_nonempty(Corpus(std::move(docs)), source_name);
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  if (format == CorpusFormat::LinePerDocument) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open corpus " + path.string());
    return load_corpus(in, path.filename().string());
  }
  if (!std::filesystem::is_directory(path)) {
    throw Error(ErrorKind::Io, "corpus directory not found: " + path.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(path)) {
    if (entry.is_regular_file() && entry.path().extension() == ".txt") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<Document> docs;
  for (const auto& file : files) {
    const std::string text = read_file(file);
    check_utf8(text, file.filename().string(), 0);
    docs.push_back({file.filename().string(), tokenize_words(text)});
  }
  return require_nonempty(Corpus(std::move(docs)), path.string());
}

Corpus corpus_from_texts(const std::vector<std::string>& texts) {
  std::vector<Document> docs;
  docs.reserve(texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    check_utf8(texts[i], "text " + std::to_string(i), 0);
    docs.push_back({"doc" + std::to_string(i), tokenize_words(texts[i])});
  }
  return require_nonempty(Corpus(std::move(docs)), "<memory>");
}

TextSample sample_span(const Corpus& corpus, RandomSource& rng,
                       std::size_t max_words, const SpanOptions& options) {
  if (corpus.empty()) throw Error(ErrorKind::EmptyCorpus, "sample_span on empty corpus");
  if (max_words < 1) throw Error(ErrorKind::Contract, "max_words must be >= 1");

  const std::size_t attempts = std::max<std::size_t>(1, options.max_retries);
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    std::size_t doc_index;
    std::size_t start;
    if (options.length_weighted) {
      const std::size_t word = rng.below(corpus.total_words());
      doc_index = corpus.document_of_word(word);
      // The global draw already fixes a uniform start inside the document.
      start = word - corpus.first_word(doc_index);
    } else {
      doc_index = rng.below(corpus.documents().size());
      start = rng.below(corpus.documents()[doc_index].words.size());
    }
    const Document& doc = corpus.documents()[doc_index];
    const std::size_t count = std::min(max_words, doc.words.size() - start);
    TextSample sample{{doc.words.begin() + static_cast<std::ptrdiff_t>(start),
                       doc.words.begin() + static_cast<std::ptrdiff_t>(start + count)},
                      doc.id};
    if (!options.accept_word ||
        std::all_of(sample.words.begin(), sample.words.end(),
                    [&](const std::string& w) { return options.accept_word(w); })) {
      return sample;
    }
  }
  throw Error(ErrorKind::Generation,
              "no renderable span found after " + std::to_string(attempts) +
                  " attempts");
}

}  // namespace ocrsynth
