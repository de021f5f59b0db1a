// parser.hpp - LaTeX subset parser and canonical serializer.
//
// Grammar:
//   label    := item*
//   item     := run | symbol | scripted | group | linebreak | space
//   run      := (letter | digit | punct)+
//   symbol   := "\" command ( "{" item* "}" )?   argument only for arg-commands
//   scripted := atom ("^" arg)? ("_" arg)? | atom ("_" arg)? ("^" arg)?
//   atom     := run-char | symbol | group
//   arg      := "{" item* "}" | single-char
//   group    := "{" item* "}"
//   linebreak:= "\\"
//   space    := " " | "\;" | "\,"
//
// A script binds to the last character of a preceding run, the preceding
// symbol or group, or (when nothing precedes it) to an empty group. Runs of
// whitespace collapse to one Space; plain spaces next to a line break are
// dropped. A braced argument holding exactly one non-group item is stored as
// that item, otherwise as a Group.

#pragma once

#include <string>
#include <string_view>

#include "ocrsynth/tex/ast.hpp"
#include "ocrsynth/tex/commands.hpp"

namespace ocrsynth::tex {

/// Throws SyntaxError (unbalanced braces, dangling ^/_, reserved characters,
/// double scripts) or UnsupportedCommandError.
MathAst parse_label(std::string_view label,
                    const CommandTable& commands = CommandTable::builtin());

/// Canonical text: scripts always braced, superscript before subscript,
/// line breaks as " \\ ". parse_label(serialize(parse_label(s))) equals
/// parse_label(s).
std::string serialize(const MathAst& ast);
std::string serialize(const Node& node);

/// Characters that may appear inside a Run.
bool is_run_char(char32_t c);

}  // namespace ocrsynth::tex
