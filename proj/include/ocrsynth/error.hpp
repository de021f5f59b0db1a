// error.hpp - exception types shared by every ocrsynth module.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ocrsynth {

enum class ErrorKind {
  Input,               // malformed input data (encoding, shapes, lengths)
  EmptyCorpus,
  Syntax,              // label grammar violation
  UnsupportedCommand,  // unknown \command in a label
  MissingGlyph,
  TextOverflow,        // ink does not fit the canvas
  InvalidFactor,
  Contract,            // precondition violated by the caller
  Io,
  Generation,          // retry budget exhausted while building records
  Config,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Grammar error; position is the codepoint offset into the label.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : Error(ErrorKind::Syntax,
              message + " at position " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnsupportedCommandError : public Error {
 public:
  UnsupportedCommandError(const std::string& command, std::size_t position)
      : Error(ErrorKind::UnsupportedCommand,
              "unsupported command '" + command + "' at position " +
                  std::to_string(position)),
        command_(command) {}

  const std::string& command() const noexcept { return command_; }

 private:
  std::string command_;
};

class MissingGlyphError : public Error {
 public:
  explicit MissingGlyphError(char32_t codepoint);

  char32_t codepoint() const noexcept { return codepoint_; }

 private:
  char32_t codepoint_;
};

}  // namespace ocrsynth
