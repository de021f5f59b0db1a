// commands.hpp - table of supported \commands (mirrors data/commands.txt).

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ocrsynth::tex {

enum class CommandKind { Symbol, Accent, Blackboard, Style, Space, LineBreak };

struct CommandInfo {
  std::string name;  // including the leading backslash
  CommandKind kind = CommandKind::Symbol;
  char32_t codepoint = 0;  // Symbol/Accent glyph
  int space_eighteenths = 0;  // Space width in 1/18 em

  bool takes_argument() const {
    return kind == CommandKind::Accent || kind == CommandKind::Blackboard ||
           kind == CommandKind::Style;
  }
};

class CommandTable {
 public:
  /// Parses the documented text format; throws Error(Config) on bad lines.
  static CommandTable parse(std::string_view text);

  /// The table compiled in from data/commands.txt.
  static const CommandTable& builtin();

  const CommandInfo* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  const std::map<std::string, CommandInfo, std::less<>>& entries() const {
    return entries_;
  }

 private:
  std::map<std::string, CommandInfo, std::less<>> entries_;
};

/// Source text of the builtin table (generated at build time).
std::string_view builtin_command_table_text();

/// Double-struck codepoint for an ASCII capital or lowercase letter, or 0.
char32_t blackboard_codepoint(char32_t letter);

}  // namespace ocrsynth::tex
