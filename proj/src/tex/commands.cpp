// commands.cpp

#include "ocrsynth/tex/commands.hpp"

#include <sstream>

#include "ocrsynth/error.hpp"

namespace ocrsynth::tex {
namespace {

CommandKind parse_kind(const std::string& tag, std::size_t line_no) {
  if (tag == "symbol") return CommandKind::Symbol;
  if (tag == "accent") return CommandKind::Accent;
  if (tag == "blackboard") return CommandKind::Blackboard;
  if (tag == "style") return CommandKind::Style;
  if (tag == "space") return CommandKind::Space;
  if (tag == "linebreak") return CommandKind::LineBreak;
  throw Error(ErrorKind::Config, "command table line " + std::to_string(line_no) +
                                     ": unknown kind '" + tag + "'");
}

char32_t parse_codepoint(const std::string& field, std::size_t line_no) {
  if (field.size() < 3 || field.compare(0, 2, "U+") != 0) {
    throw Error(ErrorKind::Config, "command table line " + std::to_string(line_no) +
                                       ": expected U+XXXX, got '" + field + "'");
  }
  return static_cast<char32_t>(std::stoul(field.substr(2), nullptr, 16));
}

}  // namespace

CommandTable CommandTable::parse(std::string_view text) {
  CommandTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string name, kind, value;
    if (!(fields >> name >> kind >> value) || name.size() < 2 || name[0] != '\\') {
      throw Error(ErrorKind::Config,
                  "command table line " + std::to_string(line_no) + " is malformed");
    }
    CommandInfo info;
    info.name = name;
    info.kind = parse_kind(kind, line_no);
    if (info.kind == CommandKind::Symbol || info.kind == CommandKind::Accent) {
      info.codepoint = parse_codepoint(value, line_no);
    } else if (info.kind == CommandKind::Space) {
      info.space_eighteenths = std::stoi(value);
    }
    table.entries_[name] = std::move(info);
  }
  return table;
}

const CommandTable& CommandTable::builtin() {
  static const CommandTable table = parse(builtin_command_table_text());
  return table;
}

const CommandInfo* CommandTable::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

char32_t blackboard_codepoint(char32_t letter) {
  // Letters that live in the Letterlike Symbols block.
  switch (letter) {
    case U'C': return 0x2102;
    case U'H': return 0x210D;
    case U'N': return 0x2115;
    case U'P': return 0x2119;
    case U'Q': return 0x211A;
    case U'R': return 0x211D;
    case U'Z': return 0x2124;
    default: break;
  }
  if (letter >= U'A' && letter <= U'Z') return 0x1D538 + (letter - U'A');
  if (letter >= U'a' && letter <= U'z') return 0x1D552 + (letter - U'a');
  if (letter >= U'0' && letter <= U'9') return 0x1D7D8 + (letter - U'0');
  return 0;
}

}  // namespace ocrsynth::tex
