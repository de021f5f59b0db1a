// ast.hpp - parse tree of the supported LaTeX math-mode subset.

#pragma once

#include <optional>
#include <string>
#include <vector>

namespace ocrsynth::tex {

enum class NodeKind { Run, Symbol, Script, Group, LineBreak, Space };

const char* node_kind_name(NodeKind kind);

/// One AST node. Children are stored by value:
///   Group  - children are the items
///   Symbol - children holds the argument (0 or 1 node)
///   Script - children = base, then superscript (if has_sup), then subscript
///            (if has_sub)
/// `text` carries Run characters, the Symbol command (with backslash), or the
/// Space form (" ", "\;", "\,").
struct Node {
  NodeKind kind = NodeKind::Group;
  std::string text;
  std::vector<Node> children;
  bool has_sup = false;
  bool has_sub = false;

  static Node run(std::string text);
  static Node symbol(std::string command);
  static Node symbol(std::string command, Node argument);
  static Node script(Node base, std::optional<Node> sup, std::optional<Node> sub);
  static Node group(std::vector<Node> children = {});
  static Node line_break();
  static Node space(std::string form = " ");

  const Node* argument() const;
  const Node& base() const;
  const Node* superscript() const;
  const Node* subscript() const;

  bool operator==(const Node&) const = default;
};

/// The root is always a Group holding the top-level items.
struct MathAst {
  Node root = Node::group();

  bool operator==(const MathAst&) const = default;
};

/// Compact one-line form, e.g. Group[Script(Run("x"), sup=Run("2"))].
std::string to_debug_string(const Node& node);

/// Indented multi-line tree for `inspect`.
std::string to_tree_string(const Node& node);

}  // namespace ocrsynth::tex
