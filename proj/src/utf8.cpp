// utf8.cpp - UTF-8 codec and error helpers.

#include "ocrsynth/utf8.hpp"

#include <cstdint>
#include <cstdio>

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include "ocrsynth/error.hpp"

namespace ocrsynth {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input: return "input";
    case ErrorKind::EmptyCorpus: return "empty-corpus";
    case ErrorKind::Syntax: return "syntax";
    case ErrorKind::UnsupportedCommand: return "unsupported-command";
    case ErrorKind::MissingGlyph: return "missing-glyph";
    case ErrorKind::TextOverflow: return "text-overflow";
    case ErrorKind::InvalidFactor: return "invalid-factor";
    case ErrorKind::Contract: return "contract";
    case ErrorKind::Io: return "io";
    case ErrorKind::Generation: return "generation";
    case ErrorKind::Config: return "config";
  }
  return "unknown";
}

MissingGlyphError::MissingGlyphError(char32_t codepoint)
    : Error(ErrorKind::MissingGlyph,
            "no glyph for " + utf8::codepoint_name(codepoint) +
                " in the selected or fallback font"),
      codepoint_(codepoint) {}

namespace utf8 {
namespace {

// Decodes one scalar starting at bytes[i]; returns its length or 0 if invalid.
std::size_t decode_one(std::string_view bytes, std::size_t i, char32_t& out) {
  const auto b0 = static_cast<std::uint8_t>(bytes[i]);
  if (b0 < 0x80) {
    out = b0;
    return 1;
  }
  std::size_t len = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    len = 2; cp = b0 & 0x1F; min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    len = 3; cp = b0 & 0x0F; min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    len = 4; cp = b0 & 0x07; min = 0x10000;
  } else {
    return 0;
  }
  if (i + len > bytes.size()) return 0;
  for (std::size_t k = 1; k < len; ++k) {
    const auto b = static_cast<std::uint8_t>(bytes[i + k]);
    if ((b & 0xC0) != 0x80) return 0;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return 0;
  out = cp;
  return len;
}

}  // namespace

std::size_t find_invalid(std::string_view bytes) {
  std::size_t i = 0;
  char32_t cp;
  while (i < bytes.size()) {
    const std::size_t n = decode_one(bytes, i, cp);
    if (n == 0) return i;
    i += n;
  }
  return std::string_view::npos;
}

std::u32string decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  std::size_t i = 0;
  char32_t cp;
  while (i < bytes.size()) {
    const std::size_t n = decode_one(bytes, i, cp);
    if (n == 0) {
      throw Error(ErrorKind::Input,
                  "invalid UTF-8 at byte offset " + std::to_string(i));
    }
    out.push_back(cp);
    i += n;
  }
  return out;
}

void append(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string encode(char32_t cp) {
  std::string out;
  append(out, cp);
  return out;
}

std::string encode(std::u32string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char32_t cp : text) append(out, cp);
  return out;
}

std::size_t length(std::string_view bytes) { return decode(bytes).size(); }

std::string nfc(std::string_view bytes) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorKind::Input, "ICU NFC normalizer unavailable");
  }
  const auto source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(bytes.data(), static_cast<std::int32_t>(bytes.size())));
  // Quick check avoids a copy for the common already-normalized case.
  if (normalizer->isNormalized(source, status) && U_SUCCESS(status)) {
    return std::string(bytes);
  }
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = normalizer->normalize(source, status);
  if (U_FAILURE(status)) {
    throw Error(ErrorKind::Input, "NFC normalization failed");
  }
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

std::string codepoint_name(char32_t cp) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "U+%04X", static_cast<unsigned>(cp));
  return buf;
}

}  // namespace utf8
}  // namespace ocrsynth
