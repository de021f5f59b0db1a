// ast.cpp

#include "ocrsynth/tex/ast.hpp"

#include "ocrsynth/error.hpp"

namespace ocrsynth::tex {

const char* node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Run: return "Run";
    case NodeKind::Symbol: return "Symbol";
    case NodeKind::Script: return "Script";
    case NodeKind::Group: return "Group";
    case NodeKind::LineBreak: return "LineBreak";
    case NodeKind::Space: return "Space";
  }
  return "?";
}

Node Node::run(std::string text) {
  Node n;
  n.kind = NodeKind::Run;
  n.text = std::move(text);
  return n;
}

Node Node::symbol(std::string command) {
  Node n;
  n.kind = NodeKind::Symbol;
  n.text = std::move(command);
  return n;
}

Node Node::symbol(std::string command, Node argument) {
  Node n = symbol(std::move(command));
  n.children.push_back(std::move(argument));
  return n;
}

Node Node::script(Node base, std::optional<Node> sup, std::optional<Node> sub) {
  if (!sup && !sub) {
    throw Error(ErrorKind::Contract, "Script needs a superscript or subscript");
  }
  Node n;
  n.kind = NodeKind::Script;
  n.children.push_back(std::move(base));
  if (sup) {
    n.has_sup = true;
    n.children.push_back(std::move(*sup));
  }
  if (sub) {
    n.has_sub = true;
    n.children.push_back(std::move(*sub));
  }
  return n;
}

Node Node::group(std::vector<Node> children) {
  Node n;
  n.kind = NodeKind::Group;
  n.children = std::move(children);
  return n;
}

Node Node::line_break() {
  Node n;
  n.kind = NodeKind::LineBreak;
  return n;
}

Node Node::space(std::string form) {
  Node n;
  n.kind = NodeKind::Space;
  n.text = std::move(form);
  return n;
}

const Node* Node::argument() const {
  return kind == NodeKind::Symbol && !children.empty() ? &children.front()
                                                       : nullptr;
}

const Node& Node::base() const { return children.at(0); }

const Node* Node::superscript() const {
  return kind == NodeKind::Script && has_sup ? &children.at(1) : nullptr;
}

const Node* Node::subscript() const {
  if (kind != NodeKind::Script || !has_sub) return nullptr;
  return &children.at(has_sup ? 2 : 1);
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void debug(const Node& node, std::string& out) {
  switch (node.kind) {
    case NodeKind::Run:
      out += "Run(" + quoted(node.text) + ")";
      break;
    case NodeKind::Space:
      out += "Space(" + quoted(node.text) + ")";
      break;
    case NodeKind::LineBreak:
      out += "LineBreak";
      break;
    case NodeKind::Symbol:
      out += "Symbol(" + quoted(node.text);
      if (const Node* arg = node.argument()) {
        out += ", ";
        debug(*arg, out);
      }
      out += ")";
      break;
    case NodeKind::Script:
      out += "Script(";
      debug(node.base(), out);
      if (const Node* sup = node.superscript()) {
        out += ", sup=";
        debug(*sup, out);
      }
      if (const Node* sub = node.subscript()) {
        out += ", sub=";
        debug(*sub, out);
      }
      out += ")";
      break;
    case NodeKind::Group:
      out += "Group[";
      for (std::size_t i = 0; i < node.children.size(); ++i) {
        if (i) out += ", ";
        debug(node.children[i], out);
      }
      out += "]";
      break;
  }
}

void tree(const Node& node, int depth, const std::string& label,
          std::string& out) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  if (!label.empty()) out += label + ": ";
  out += node_kind_name(node.kind);
  if (node.kind == NodeKind::Run || node.kind == NodeKind::Symbol ||
      node.kind == NodeKind::Space) {
    out += " " + quoted(node.text);
  }
  out += "\n";
  switch (node.kind) {
    case NodeKind::Group:
      for (const Node& c : node.children) tree(c, depth + 1, "", out);
      break;
    case NodeKind::Symbol:
      if (const Node* arg = node.argument()) tree(*arg, depth + 1, "arg", out);
      break;
    case NodeKind::Script:
      tree(node.base(), depth + 1, "base", out);
      if (const Node* sup = node.superscript()) tree(*sup, depth + 1, "sup", out);
      if (const Node* sub = node.subscript()) tree(*sub, depth + 1, "sub", out);
      break;
    default:
      break;
  }
}

}  // namespace

std::string to_debug_string(const Node& node) {
  std::string out;
  debug(node, out);
  return out;
}

std::string to_tree_string(const Node& node) {
  std::string out;
  tree(node, 0, "", out);
  return out;
}

}  // namespace ocrsynth::tex
