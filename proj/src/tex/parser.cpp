// parser.cpp - recursive-descent parser for the label grammar.

#include "ocrsynth/tex/parser.hpp"

#include <string>
#include <utility>
#include <vector>

#include "ocrsynth/error.hpp"
#include "ocrsynth/utf8.hpp"

namespace ocrsynth::tex {
namespace {

bool is_ascii_space(char32_t c) {
  return c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\v' ||
         c == U'\f';
}

bool is_ascii_letter(char32_t c) {
  return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
}

bool is_reserved(char32_t c) {
  return c == U'$' || c == U'%' || c == U'&' || c == U'#' || c == U'~';
}

bool is_plain_space(const Node& n) {
  return n.kind == NodeKind::Space && n.text == " ";
}

Node unwrap(std::vector<Node> items) {
  if (items.size() == 1 && items.front().kind != NodeKind::Group) {
    return std::move(items.front());
  }
  return Node::group(std::move(items));
}

class Parser {
 public:
  Parser(std::string_view label, const CommandTable& commands)
      : text_(utf8::decode(label)), commands_(commands) {}

  MathAst parse() {
    MathAst ast;
    ast.root = Node::group(parse_items(false, 0));
    return ast;
  }

 private:
  std::vector<Node> parse_items(bool in_group, std::size_t open_pos) {
    std::vector<Node> items;
    while (pos_ < text_.size()) {
      const char32_t c = text_[pos_];
      if (c == U'}') {
        if (!in_group) throw SyntaxError("unbalanced '}'", pos_);
        ++pos_;
        return finish(std::move(items));
      }
      if (c == U'{') {
        const std::size_t open = pos_++;
        items.push_back(Node::group(parse_items(true, open)));
      } else if (is_ascii_space(c)) {
        while (pos_ < text_.size() && is_ascii_space(text_[pos_])) ++pos_;
        if (items.empty() || !is_plain_space(items.back())) {
          items.push_back(Node::space(" "));
        }
      } else if (c == U'^' || c == U'_') {
        attach_script(items);
      } else if (c == U'\\') {
        items.push_back(parse_command());
      } else if (is_reserved(c)) {
        throw SyntaxError("reserved character '" + utf8::encode(c) + "'", pos_);
      } else if (!is_run_char(c)) {
        throw SyntaxError("unsupported character " + utf8::codepoint_name(c), pos_);
      } else {
        ++pos_;
        if (!items.empty() && items.back().kind == NodeKind::Run) {
          utf8::append(items.back().text, c);
        } else {
          items.push_back(Node::run(utf8::encode(c)));
        }
      }
    }
    if (in_group) throw SyntaxError("unbalanced '{'", open_pos);
    return finish(std::move(items));
  }

  // Drops plain spaces that touch a line break.
  static std::vector<Node> finish(std::vector<Node> items) {
    std::vector<Node> out;
    out.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (is_plain_space(items[i])) {
        const bool after_break = i > 0 && items[i - 1].kind == NodeKind::LineBreak;
        const bool before_break =
            i + 1 < items.size() && items[i + 1].kind == NodeKind::LineBreak;
        if (after_break || before_break) continue;
      }
      out.push_back(std::move(items[i]));
    }
    return out;
  }

  std::string read_command_name() {
    const std::size_t start = pos_++;
    if (pos_ >= text_.size()) throw SyntaxError("dangling backslash", start);
    std::u32string name = U"\\";
    if (is_ascii_letter(text_[pos_])) {
      while (pos_ < text_.size() && is_ascii_letter(text_[pos_])) {
        name.push_back(text_[pos_++]);
      }
    } else {
      name.push_back(text_[pos_++]);
    }
    return utf8::encode(name);
  }

  Node parse_command() {
    const std::size_t start = pos_;
    const std::string name = read_command_name();
    const CommandInfo* info = commands_.find(name);
    if (!info) throw UnsupportedCommandError(name, start);
    switch (info->kind) {
      case CommandKind::LineBreak:
        return Node::line_break();
      case CommandKind::Space:
        return Node::space(name);
      case CommandKind::Symbol:
        return Node::symbol(name);
      default:
        return Node::symbol(name, parse_argument(name));
    }
  }

  Node parse_argument(const std::string& owner) {
    while (pos_ < text_.size() && is_ascii_space(text_[pos_])) ++pos_;
    if (pos_ >= text_.size()) {
      throw SyntaxError("missing argument for '" + owner + "'", pos_);
    }
    const char32_t c = text_[pos_];
    if (c == U'{') {
      const std::size_t open = pos_++;
      return unwrap(parse_items(true, open));
    }
    if (c == U'\\') {
      const std::size_t start = pos_;
      Node n = parse_command();
      if (n.kind == NodeKind::LineBreak || n.kind == NodeKind::Space) {
        throw SyntaxError("missing argument for '" + owner + "'", start);
      }
      return n;
    }
    if (is_run_char(c)) {
      ++pos_;
      return Node::run(utf8::encode(c));
    }
    throw SyntaxError("missing argument for '" + owner + "'", pos_);
  }

  void attach_script(std::vector<Node>& items) {
    const std::size_t at = pos_;
    const bool is_sup = text_[pos_] == U'^';
    ++pos_;
    Node arg = parse_argument(is_sup ? "^" : "_");

    if (!items.empty() && items.back().kind == NodeKind::Script) {
      Node& prev = items.back();
      if (is_sup ? prev.has_sup : prev.has_sub) {
        throw SyntaxError(is_sup ? "double superscript" : "double subscript", at);
      }
      if (is_sup) {
        prev.children.insert(prev.children.begin() + 1, std::move(arg));
        prev.has_sup = true;
      } else {
        prev.children.push_back(std::move(arg));
        prev.has_sub = true;
      }
      return;
    }

    Node base = Node::group();
    if (!items.empty()) {
      Node& prev = items.back();
      if (prev.kind == NodeKind::Run) {
        std::u32string chars = utf8::decode(prev.text);
        base = Node::run(utf8::encode(chars.back()));
        chars.pop_back();
        if (chars.empty()) {
          items.pop_back();
        } else {
          prev.text = utf8::encode(chars);
        }
      } else if (prev.kind == NodeKind::Symbol || prev.kind == NodeKind::Group) {
        base = std::move(prev);
        items.pop_back();
      }
    }
    std::optional<Node> sup, sub;
    (is_sup ? sup : sub) = std::move(arg);
    items.push_back(Node::script(std::move(base), std::move(sup), std::move(sub)));
  }

  std::u32string text_;
  std::size_t pos_ = 0;
  const CommandTable& commands_;
};

void emit(const Node& node, std::string& out);

void emit_items(const std::vector<Node>& items, std::string& out) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (items[i].kind == NodeKind::LineBreak) {
      if (i > 0) out.push_back(' ');
      out += "\\\\";
      if (i + 1 < items.size()) out.push_back(' ');
    } else {
      emit(items[i], out);
    }
  }
}

// Content of a braced argument: groups lose one level of braces.
void emit_braced(const Node& node, std::string& out) {
  out.push_back('{');
  if (node.kind == NodeKind::Group) {
    emit_items(node.children, out);
  } else {
    emit(node, out);
  }
  out.push_back('}');
}

void emit(const Node& node, std::string& out) {
  switch (node.kind) {
    case NodeKind::Run:
    case NodeKind::Space:
      out += node.text;
      break;
    case NodeKind::LineBreak:
      out += "\\\\";
      break;
    case NodeKind::Symbol:
      out += node.text;
      if (const Node* arg = node.argument()) emit_braced(*arg, out);
      break;
    case NodeKind::Group:
      out.push_back('{');
      emit_items(node.children, out);
      out.push_back('}');
      break;
    case NodeKind::Script:
      emit(node.base(), out);
      if (const Node* sup = node.superscript()) {
        out.push_back('^');
        emit_braced(*sup, out);
      }
      if (const Node* sub = node.subscript()) {
        out.push_back('_');
        emit_braced(*sub, out);
      }
      break;
  }
}

}  // namespace

bool is_run_char(char32_t c) {
  if (c < 0x21 || (c >= 0x7F && c <= 0x9F)) return false;
  if (c >= 0xD800 && c <= 0xDFFF) return false;
  switch (c) {
    case U'\\': case U'{': case U'}': case U'^': case U'_':
    case U'$': case U'%': case U'&': case U'#': case U'~':
      return false;
    default:
      return true;
  }
}

MathAst parse_label(std::string_view label, const CommandTable& commands) {
  return Parser(label, commands).parse();
}

std::string serialize(const MathAst& ast) {
  std::string out;
  if (ast.root.kind == NodeKind::Group) {
    emit_items(ast.root.children, out);
  } else {
    emit(ast.root, out);
  }
  return out;
}

std::string serialize(const Node& node) {
  std::string out;
  emit(node, out);
  return out;
}

}  // namespace ocrsynth::tex
