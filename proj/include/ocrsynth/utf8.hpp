// utf8.hpp - strict UTF-8 decoding/encoding and NFC normalization.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace ocrsynth::utf8 {

/// Decodes strictly (no overlongs, no surrogates). Throws Error(Input) naming
/// the byte offset of the first invalid sequence.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t codepoint);
std::string encode(char32_t codepoint);

/// Byte offset of the first invalid sequence, or npos when valid.
std::size_t find_invalid(std::string_view bytes);

std::size_t length(std::string_view bytes);

/// Unicode NFC (ICU-backed).
std::string nfc(std::string_view bytes);

/// "U+03C6" style rendering for messages.
std::string codepoint_name(char32_t codepoint);

}  // namespace ocrsynth::utf8
