// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mathreader/math_parser.hpp"

#include <algorithm>
#include <cstddef>
#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "json.hpp"
#include "mathreader/text_util.hpp"

namespace mathreader {

namespace {

constexpr std::size_t kNoMatch = static_cast<std::size_t>(-1);
constexpr int kMaxDepth = 128;

bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

const std::unordered_set<std::string>& function_set() {
  static const std::unordered_set<std::string> s(known_function_names().begin(),
                                                 known_function_names().end());
  return s;
}

const std::unordered_set<std::string>& symbol_command_set() {
  static const std::unordered_set<std::string> s(
      known_symbol_commands().begin(), known_symbol_commands().end());
  return s;
}

const std::unordered_map<std::string, BigOpKind>& big_op_map() {
  static const std::unordered_map<std::string, BigOpKind> m = {
      {"sum", BigOpKind::Sum},
      {"prod", BigOpKind::Product},
      {"int", BigOpKind::Integral},
      {"lim", BigOpKind::Limit},
  };
  return m;
}

const std::unordered_map<std::string, BinOpKind>& bin_op_command_map() {
  static const std::unordered_map<std::string, BinOpKind> m = {
      {"times", BinOpKind::Times},   {"cdot", BinOpKind::Times},
      {"leq", BinOpKind::LessEq},    {"le", BinOpKind::LessEq},
      {"geq", BinOpKind::GreaterEq}, {"ge", BinOpKind::GreaterEq},
      {"neq", BinOpKind::NotEq},     {"ne", BinOpKind::NotEq},
      {"approx", BinOpKind::Approx},
  };
  return m;
}

bool bin_op_for_char(char c, BinOpKind& out) {
  switch (c) {
    case '+': out = BinOpKind::Plus; return true;
    case '-': out = BinOpKind::Minus; return true;
    case '*': out = BinOpKind::Times; return true;
    case '=': out = BinOpKind::Equals; return true;
    case '<': out = BinOpKind::Less; return true;
    case '>': out = BinOpKind::Greater; return true;
    default: return false;
  }
}

bool is_spacing_command(std::string_view name) {
  return name == "," || name == ";" || name == ":" || name == "!" ||
         name == " " || name == "quad" || name == "qquad" || name == "thinspace";
}

bool is_text_wrapper_command(std::string_view name) {
  return name == "text" || name == "textrm" || name == "textbf" ||
         name == "textit" || name == "mathrm" || name == "mathbf" ||
         name == "mathit" || name == "mbox" || name == "operatorname";
}

// Escaped single-char commands that stand for a literal character.
bool literal_escape_char(std::string_view name, std::string& out) {
  if (name.size() != 1) return false;
  switch (name[0]) {
    case '$': case '#': case '%': case '&': case '_':
      out = std::string(name);
      return true;
    case '{': out = "lbrace"; return true;
    case '}': out = "rbrace"; return true;
    case '|': out = "Vert"; return true;
    default: return false;
  }
}

struct Parser {
  const std::vector<MathToken>& toks;
  std::vector<std::size_t> brace_match;
  std::vector<std::size_t> paren_match;
  std::vector<std::size_t> bracket_match;
  std::size_t pos = 0;

  explicit Parser(const std::vector<MathToken>& tokens) : toks(tokens) {
    const std::size_t n = toks.size();
    brace_match.assign(n, kNoMatch);
    paren_match.assign(n, kNoMatch);
    bracket_match.assign(n, kNoMatch);
    std::vector<std::size_t> braces, parens, brackets;
    for (std::size_t i = 0; i < n; ++i) {
      const MathToken& t = toks[i];
      if (t.kind == TokenKind::OpenBrace) {
        braces.push_back(i);
      } else if (t.kind == TokenKind::CloseBrace) {
        if (!braces.empty()) {
          brace_match[braces.back()] = i;
          braces.pop_back();
        }
      } else if (t.kind == TokenKind::Symbol) {
        if (t.text == "(") {
          parens.push_back(i);
        } else if (t.text == ")") {
          if (!parens.empty()) {
            paren_match[parens.back()] = i;
            parens.pop_back();
          }
        } else if (t.text == "[") {
          brackets.push_back(i);
        } else if (t.text == "]") {
          if (!brackets.empty()) {
            bracket_match[brackets.back()] = i;
            brackets.pop_back();
          }
        }
      }
    }
  }

  std::string slice(std::size_t begin, std::size_t end) const {
    std::string out;
    for (std::size_t i = begin; i < end && i < toks.size(); ++i) {
      out += toks[i].text;
    }
    return out;
  }

  void skip_whitespace(std::size_t barrier) {
    while (pos < barrier && toks[pos].kind == TokenKind::Whitespace) ++pos;
  }

  // Index of the next non-whitespace token before barrier, or kNoMatch.
  std::size_t peek(std::size_t barrier) const {
    std::size_t i = pos;
    while (i < barrier && toks[i].kind == TokenKind::Whitespace) ++i;
    return i < barrier ? i : kNoMatch;
  }

  static MathNode shape(std::vector<MathNode> nodes) {
    if (nodes.empty()) return make_seq();
    if (nodes.size() == 1) return std::move(nodes.front());
    return make_seq(std::move(nodes));
  }

  MathNode parse_region(std::size_t begin, std::size_t barrier, int depth) {
    pos = begin;
    return shape(parse_nodes(barrier, depth));
  }

  std::vector<MathNode> parse_nodes(std::size_t barrier, int depth) {
    std::vector<MathNode> out;
    if (depth > kMaxDepth) {
      skip_whitespace(barrier);
      if (pos < barrier) {
        out.push_back(make_opaque(slice(pos, barrier)));
        pos = barrier;
      }
      return out;
    }
    while (pos < barrier) parse_item(barrier, depth, out);
    return out;
  }

  // Appends zero or more nodes and always consumes at least one token.
  void parse_item(std::size_t barrier, int depth, std::vector<MathNode>& out) {
    const MathToken& t = toks[pos];
    if (t.kind == TokenKind::Whitespace) {
      ++pos;
      return;
    }
    if (depth > kMaxDepth) {
      out.push_back(make_opaque(t.text));
      ++pos;
      return;
    }
    switch (t.kind) {
      case TokenKind::Whitespace:
        ++pos;
        return;
      case TokenKind::Number:
        out.push_back(make_num(t.text));
        ++pos;
        apply_postfix(barrier, depth, out);
        return;
      case TokenKind::OpenBrace: {
        const std::size_t m = brace_match[pos];
        if (m != kNoMatch && m < barrier) {
          MathNode content = parse_region(pos + 1, m, depth + 1);
          pos = m + 1;
          out.push_back(make_group(std::move(content)));
          apply_postfix(barrier, depth, out);
        } else {
          out.push_back(make_opaque(t.text));
          ++pos;
        }
        return;
      }
      case TokenKind::CloseBrace:
      case TokenKind::Ampersand:
        out.push_back(make_opaque(t.text));
        ++pos;
        return;
      case TokenKind::Subscript:
      case TokenKind::Superscript:
        // No preceding atom to bind to.
        out.push_back(make_opaque(t.text));
        ++pos;
        return;
      case TokenKind::Symbol:
        parse_symbol(barrier, depth, out);
        return;
      case TokenKind::Command:
        parse_command(barrier, depth, out);
        return;
    }
  }

  void parse_symbol(std::size_t barrier, int depth, std::vector<MathNode>& out) {
    const MathToken& t = toks[pos];
    BinOpKind op;
    if (t.text.size() == 1 && bin_op_for_char(t.text[0], op)) {
      out.push_back(make_bin_op(op));
      ++pos;
      return;
    }
    if (t.text == "(") {
      const std::size_t m = paren_match[pos];
      if (m != kNoMatch && m < barrier) {
        MathNode content = parse_region(pos + 1, m, depth + 1);
        pos = m + 1;
        out.push_back(make_group(std::move(content), "(", ")"));
        apply_postfix(barrier, depth, out);
        return;
      }
    }
    if (t.text == "[") {
      const std::size_t m = bracket_match[pos];
      if (m != kNoMatch && m < barrier) {
        MathNode content = parse_region(pos + 1, m, depth + 1);
        pos = m + 1;
        out.push_back(make_group(std::move(content), "[", "]"));
        apply_postfix(barrier, depth, out);
        return;
      }
    }
    out.push_back(make_sym(t.text));
    ++pos;
    apply_postfix(barrier, depth, out);
  }

  void parse_command(std::size_t barrier, int depth, std::vector<MathNode>& out) {
    const MathToken& t = toks[pos];
    const std::string name(t.name());

    if (name.empty()) {  // lone trailing backslash
      out.push_back(make_opaque(t.text));
      ++pos;
      return;
    }
    if (is_spacing_command(name)) {
      ++pos;
      return;
    }
    if (name == "\\") {  // row separator
      out.push_back(make_opaque(t.text));
      ++pos;
      return;
    }
    std::string literal;
    if (literal_escape_char(name, literal)) {
      out.push_back(make_sym(literal));
      ++pos;
      apply_postfix(barrier, depth, out);
      return;
    }
    if (name == "frac" || name == "dfrac" || name == "tfrac") {
      ++pos;
      MathNode num = parse_construct_arg(barrier, depth);
      MathNode den = parse_construct_arg(barrier, depth);
      out.push_back(make_frac(std::move(num), std::move(den)));
      apply_postfix(barrier, depth, out);
      return;
    }
    if (name == "sqrt") {
      ++pos;
      bool has_degree = false;
      MathNode degree = make_seq();
      const std::size_t p = peek(barrier);
      if (p != kNoMatch && toks[p].kind == TokenKind::Symbol &&
          toks[p].text == "[" && bracket_match[p] != kNoMatch &&
          bracket_match[p] < barrier) {
        const std::size_t m = bracket_match[p];
        degree = parse_region(p + 1, m, depth + 1);
        pos = m + 1;
        has_degree = true;
      }
      MathNode radicand = parse_construct_arg(barrier, depth);
      out.push_back(has_degree
                        ? make_sqrt(std::move(degree), std::move(radicand))
                        : make_sqrt(std::move(radicand)));
      apply_postfix(barrier, depth, out);
      return;
    }
    if (auto it = big_op_map().find(name); it != big_op_map().end()) {
      ++pos;
      parse_big_op(it->second, barrier, depth, out);
      return;
    }
    if (name == "left") {
      parse_left(barrier, depth, out);
      return;
    }
    if (name == "right") {
      const std::size_t start = pos;
      ++pos;
      consume_fence_text(barrier);
      out.push_back(make_opaque(slice(start, pos)));
      return;
    }
    if (name == "limits" || name == "nolimits") {
      // Only meaningful right after a big operator, where parse_big_op
      // consumes it.
      out.push_back(make_opaque(t.text));
      ++pos;
      return;
    }
    if (function_set().count(name)) {
      ++pos;
      parse_function(name, barrier, depth, out);
      return;
    }
    if (auto it = bin_op_command_map().find(name);
        it != bin_op_command_map().end()) {
      out.push_back(make_bin_op(it->second));
      ++pos;
      return;
    }
    if (symbol_command_set().count(name)) {
      out.push_back(make_sym(name));
      ++pos;
      apply_postfix(barrier, depth, out);
      return;
    }
    if (is_text_wrapper_command(name)) {
      const std::size_t start = pos;
      ++pos;
      const std::size_t p = peek(barrier);
      if (p != kNoMatch && toks[p].kind == TokenKind::OpenBrace &&
          brace_match[p] != kNoMatch && brace_match[p] < barrier) {
        pos = brace_match[p] + 1;
        out.push_back(make_opaque(slice(start, pos)));
      } else {
        out.push_back(make_opaque(t.text));
      }
      apply_postfix(barrier, depth, out);
      return;
    }
    out.push_back(make_opaque(t.text));
    ++pos;
    apply_postfix(barrier, depth, out);
  }

  void parse_big_op(BigOpKind op, std::size_t barrier, int depth,
                    std::vector<MathNode>& out) {
    MathNode lower = make_seq();
    MathNode upper = make_seq();
    bool has_lower = false;
    bool has_upper = false;
    for (;;) {
      const std::size_t p = peek(barrier);
      if (p == kNoMatch) break;
      const MathToken& t = toks[p];
      if (t.kind == TokenKind::Command &&
          (t.name() == "limits" || t.name() == "nolimits")) {
        pos = p + 1;
        continue;
      }
      if (t.kind == TokenKind::Subscript && !has_lower) {
        pos = p + 1;
        lower = parse_construct_arg(barrier, depth);
        has_lower = true;
        continue;
      }
      if (t.kind == TokenKind::Superscript && !has_upper) {
        pos = p + 1;
        upper = parse_construct_arg(barrier, depth);
        has_upper = true;
        continue;
      }
      break;
    }
    MathNode body = make_seq();
    if (starts_operand(barrier)) {
      pos = peek(barrier);
      std::vector<MathNode> body_nodes;
      parse_item(barrier, depth + 1, body_nodes);
      body = shape(std::move(body_nodes));
    }
    out.push_back(make_big_op(op, std::move(lower), has_lower,
                              std::move(upper), has_upper, std::move(body)));
  }

  // Whether the next token can open a big-operator body.
  bool starts_operand(std::size_t barrier) const {
    const std::size_t p = peek(barrier);
    if (p == kNoMatch) return false;
    const MathToken& t = toks[p];
    switch (t.kind) {
      case TokenKind::Number:
      case TokenKind::OpenBrace:
        return true;
      case TokenKind::CloseBrace:
      case TokenKind::Ampersand:
      case TokenKind::Subscript:
      case TokenKind::Superscript:
      case TokenKind::Whitespace:
        return false;
      case TokenKind::Symbol: {
        BinOpKind op;
        if (t.text.size() == 1 && bin_op_for_char(t.text[0], op)) return false;
        if (t.text == ")" || t.text == "]") return false;
        return true;
      }
      case TokenKind::Command: {
        const std::string name(t.name());
        if (bin_op_command_map().count(name)) return false;
        if (name == "right" || name == "limits" || name == "nolimits")
          return false;
        if (is_spacing_command(name) || name == "\\") return false;
        return true;
      }
    }
    return false;
  }

  void parse_function(const std::string& name, std::size_t barrier, int depth,
                      std::vector<MathNode>& out) {
    bool has_exponent = false;
    MathNode exponent = make_seq();
    std::size_t p = peek(barrier);
    if (p != kNoMatch && toks[p].kind == TokenKind::Superscript) {
      pos = p + 1;
      exponent = parse_construct_arg(barrier, depth);
      has_exponent = true;
    }
    MathNode arg = make_seq();
    p = peek(barrier);
    if (p != kNoMatch) {
      const MathToken& t = toks[p];
      if (t.kind == TokenKind::OpenBrace && brace_match[p] != kNoMatch &&
          brace_match[p] < barrier) {
        arg = parse_region(p + 1, brace_match[p], depth + 1);
        pos = brace_match[p] + 1;
      } else if (t.kind == TokenKind::Symbol && t.text == "(" &&
                 paren_match[p] != kNoMatch && paren_match[p] < barrier) {
        arg = parse_region(p + 1, paren_match[p], depth + 1);
        pos = paren_match[p] + 1;
      } else if (starts_operand(barrier)) {
        pos = p;
        std::vector<MathNode> arg_nodes;
        parse_item(barrier, depth + 1, arg_nodes);
        arg = shape(std::move(arg_nodes));
      }
    }
    MathNode node = make_func(name, std::move(arg));
    if (has_exponent) node = make_power(std::move(node), std::move(exponent));
    out.push_back(std::move(node));
    apply_postfix(barrier, depth, out);
  }

  void parse_left(std::size_t barrier, int depth, std::vector<MathNode>& out) {
    const std::size_t start = pos;
    ++pos;
    const std::string fence_open = consume_fence_text(barrier);
    const std::size_t after_fence = pos;
    std::vector<MathNode> items;
    while (pos < barrier) {
      const std::size_t p = peek(barrier);
      if (p == kNoMatch) break;
      if (toks[p].kind == TokenKind::Command && toks[p].name() == "right") {
        pos = p + 1;
        const std::string fence_close = consume_fence_text(barrier);
        out.push_back(make_group(shape(std::move(items)), fence_open,
                                 fence_close));
        apply_postfix(barrier, depth, out);
        return;
      }
      parse_item(barrier, depth + 1, items);
    }
    // Unterminated fence: keep the opener verbatim, splice the content.
    out.push_back(make_opaque(slice(start, after_fence)));
    for (MathNode& n : items) out.push_back(std::move(n));
  }

  std::string consume_fence_text(std::size_t barrier) {
    const std::size_t p = peek(barrier);
    if (p == kNoMatch) return "";
    const MathToken& t = toks[p];
    if (t.kind == TokenKind::Symbol) {
      const bool alnum = t.text.size() == 1 && (is_ascii_alpha(t.text[0]) ||
                                                is_ascii_digit(t.text[0]));
      if (alnum) return "";
      pos = p + 1;
      return t.text;
    }
    if (t.kind == TokenKind::Command) {
      const std::string name(t.name());
      static const std::unordered_set<std::string> fences = {
          "{",      "}",      "|",      "langle", "rangle", "lbrace",
          "rbrace", "lvert",  "rvert",  "lfloor", "rfloor", "lceil",
          "rceil",  "vert",   "Vert",   "backslash"};
      if (fences.count(name)) {
        pos = p + 1;
        return t.text;
      }
    }
    return "";
  }

  // Argument of \frac, \sqrt, ^, _ and big-operator limits. A braced group
  // unwraps to its content; otherwise one item.
  MathNode parse_construct_arg(std::size_t barrier, int depth) {
    for (;;) {
      const std::size_t p = peek(barrier);
      if (p == kNoMatch) return make_seq();
      const MathToken& t = toks[p];
      if (t.kind == TokenKind::OpenBrace) {
        if (brace_match[p] != kNoMatch && brace_match[p] < barrier) {
          MathNode content = parse_region(p + 1, brace_match[p], depth + 1);
          pos = brace_match[p] + 1;
          return content;
        }
        pos = p + 1;
        return make_opaque(t.text);
      }
      if (t.kind == TokenKind::CloseBrace || t.kind == TokenKind::Subscript ||
          t.kind == TokenKind::Superscript) {
        return make_seq();
      }
      if (t.kind == TokenKind::Number) {
        pos = p + 1;
        return make_num(t.text);
      }
      if (t.kind == TokenKind::Symbol) {
        pos = p + 1;
        BinOpKind op;
        if (t.text.size() == 1 && bin_op_for_char(t.text[0], op))
          return make_bin_op(op);
        return make_sym(t.text);
      }
      if (t.kind == TokenKind::Ampersand) {
        pos = p + 1;
        return make_opaque(t.text);
      }
      // Command: parse one item, which may consume arguments of its own.
      pos = p;
      std::vector<MathNode> nodes;
      const std::size_t before = pos;
      parse_item(barrier, depth + 1, nodes);
      if (!nodes.empty()) return shape(std::move(nodes));
      if (pos == before) return make_seq();
      // Spacing command consumed; try again.
    }
  }

  void apply_postfix(std::size_t barrier, int depth,
                     std::vector<MathNode>& out) {
    if (out.empty()) return;
    for (;;) {
      const std::size_t p = peek(barrier);
      if (p == kNoMatch) return;
      const MathToken& t = toks[p];
      if (t.kind == TokenKind::Subscript) {
        pos = p + 1;
        MathNode sub = parse_construct_arg(barrier, depth);
        MathNode base = std::move(out.back());
        out.back() = make_subscript(std::move(base), std::move(sub));
        continue;
      }
      if (t.kind == TokenKind::Superscript) {
        pos = p + 1;
        MathNode exp = parse_construct_arg(barrier, depth);
        MathNode base = std::move(out.back());
        out.back() = make_power(std::move(base), std::move(exp));
        continue;
      }
      return;
    }
  }
};

void append_utf8_symbol(std::string_view latex, std::size_t& i,
                        std::vector<MathToken>& out) {
  const std::size_t len = utf8_sequence_length(latex, i);
  out.push_back({TokenKind::Symbol, std::string(latex.substr(i, len)), i});
  i += len;
}

}  // namespace

std::vector<MathToken> tokenize(std::string_view latex) {
  std::vector<MathToken> out;
  std::size_t i = 0;
  const std::size_t n = latex.size();
  while (i < n) {
    const char c = latex[i];
    if (c == '\\') {
      std::size_t j = i + 1;
      if (j < n && is_ascii_alpha(latex[j])) {
        while (j < n && is_ascii_alpha(latex[j])) ++j;
      } else if (j < n) {
        ++j;
      }
      out.push_back({TokenKind::Command, std::string(latex.substr(i, j - i)), i});
      i = j;
    } else if (c == '{') {
      out.push_back({TokenKind::OpenBrace, "{", i});
      ++i;
    } else if (c == '}') {
      out.push_back({TokenKind::CloseBrace, "}", i});
      ++i;
    } else if (c == '_') {
      out.push_back({TokenKind::Subscript, "_", i});
      ++i;
    } else if (c == '^') {
      out.push_back({TokenKind::Superscript, "^", i});
      ++i;
    } else if (c == '&') {
      out.push_back({TokenKind::Ampersand, "&", i});
      ++i;
    } else if (is_ascii_digit(c)) {
      std::size_t j = i + 1;
      while (j < n && is_ascii_digit(latex[j])) ++j;
      if (j < n && latex[j] == '.' && j + 1 < n && is_ascii_digit(latex[j + 1])) {
        ++j;
        while (j < n && is_ascii_digit(latex[j])) ++j;
      }
      out.push_back({TokenKind::Number, std::string(latex.substr(i, j - i)), i});
      i = j;
    } else if (is_ascii_space(c)) {
      std::size_t j = i + 1;
      while (j < n && is_ascii_space(latex[j])) ++j;
      out.push_back({TokenKind::Whitespace, std::string(latex.substr(i, j - i)), i});
      i = j;
    } else {
      append_utf8_symbol(latex, i, out);
    }
  }
  return out;
}

MathNode parse(const std::vector<MathToken>& tokens) {
  Parser p(tokens);
  return p.parse_region(0, tokens.size(), 0);
}

MathNode parse_latex(std::string_view latex) { return parse(tokenize(latex)); }

namespace {

const char* bin_op_latex(BinOpKind op) {
  switch (op) {
    case BinOpKind::Plus: return "+";
    case BinOpKind::Minus: return "-";
    case BinOpKind::Times: return "\\times";
    case BinOpKind::Equals: return "=";
    case BinOpKind::Less: return "<";
    case BinOpKind::Greater: return ">";
    case BinOpKind::LessEq: return "\\leq";
    case BinOpKind::GreaterEq: return "\\geq";
    case BinOpKind::NotEq: return "\\neq";
    case BinOpKind::Approx: return "\\approx";
  }
  return "+";
}

const char* big_op_latex(BigOpKind op) {
  switch (op) {
    case BigOpKind::Sum: return "\\sum";
    case BigOpKind::Product: return "\\prod";
    case BigOpKind::Integral: return "\\int";
    case BigOpKind::Limit: return "\\lim";
  }
  return "\\sum";
}

void print_node(const MathNode& n, std::string& out);

void print_children_joined(const MathNode& n, std::string& out) {
  bool first = true;
  for (const MathNode& c : n.children) {
    if (!first) out += ' ';
    print_node(c, out);
    first = false;
  }
}

void print_node(const MathNode& n, std::string& out) {
  switch (n.kind) {
    case AstKind::Sequence:
      print_children_joined(n, out);
      return;
    case AstKind::Sym: {
      const bool command_named =
          n.text.size() > 1 &&
          std::all_of(n.text.begin(), n.text.end(), is_ascii_alpha);
      const bool escaped_char =
          n.text.size() == 1 && (n.text[0] == '_' || n.text[0] == '&');
      if (command_named || escaped_char) out += '\\';
      out += n.text;
      return;
    }
    case AstKind::Num:
      out += n.text;
      return;
    case AstKind::BinOp:
      out += bin_op_latex(n.op);
      return;
    case AstKind::Frac:
      out += "\\frac{";
      print_node(n.children[0], out);
      out += "}{";
      print_node(n.children[1], out);
      out += '}';
      return;
    case AstKind::Power:
      print_node(n.children[0], out);
      out += "^{";
      print_node(n.children[1], out);
      out += '}';
      return;
    case AstKind::Sub:
      print_node(n.children[0], out);
      out += "_{";
      print_node(n.children[1], out);
      out += '}';
      return;
    case AstKind::BigOp:
      out += big_op_latex(n.big);
      if (n.has_lower) {
        out += "_{";
        print_node(n.children[0], out);
        out += '}';
      }
      if (n.has_upper) {
        out += "^{";
        print_node(n.children[1], out);
        out += '}';
      }
      if (!(n.children[2].kind == AstKind::Sequence &&
            n.children[2].children.empty())) {
        out += ' ';
        print_node(n.children[2], out);
      }
      return;
    case AstKind::Func:
      out += '\\';
      out += n.text;
      if (!(n.children[0].kind == AstKind::Sequence &&
            n.children[0].children.empty())) {
        out += '(';
        print_node(n.children[0], out);
        out += ')';
      }
      return;
    case AstKind::Sqrt:
      out += "\\sqrt";
      if (n.has_degree) {
        out += '[';
        print_node(n.children[0], out);
        out += ']';
      }
      out += '{';
      print_node(n.children[1], out);
      out += '}';
      return;
    case AstKind::Group:
      if (n.fence_open.empty() && n.fence_close.empty()) {
        out += '{';
        print_node(n.children[0], out);
        out += '}';
      } else if (n.fence_open == "(" && n.fence_close == ")") {
        out += '(';
        print_node(n.children[0], out);
        out += ')';
      } else if (n.fence_open == "[" && n.fence_close == "]") {
        out += '[';
        print_node(n.children[0], out);
        out += ']';
      } else {
        out += "\\left";
        out += n.fence_open.empty() ? "." : n.fence_open;
        out += ' ';
        print_node(n.children[0], out);
        out += " \\right";
        out += n.fence_close.empty() ? "." : n.fence_close;
      }
      return;
    case AstKind::Opaque:
      out += n.text;
      return;
  }
}

const char* kind_name(AstKind k) {
  switch (k) {
    case AstKind::Sequence: return "sequence";
    case AstKind::Sym: return "sym";
    case AstKind::Num: return "num";
    case AstKind::BinOp: return "binop";
    case AstKind::Frac: return "frac";
    case AstKind::Power: return "power";
    case AstKind::Sub: return "sub";
    case AstKind::BigOp: return "bigop";
    case AstKind::Func: return "func";
    case AstKind::Sqrt: return "sqrt";
    case AstKind::Group: return "group";
    case AstKind::Opaque: return "opaque";
  }
  return "?";
}

const char* bin_op_name(BinOpKind op) {
  switch (op) {
    case BinOpKind::Plus: return "plus";
    case BinOpKind::Minus: return "minus";
    case BinOpKind::Times: return "times";
    case BinOpKind::Equals: return "equals";
    case BinOpKind::Less: return "lt";
    case BinOpKind::Greater: return "gt";
    case BinOpKind::LessEq: return "leq";
    case BinOpKind::GreaterEq: return "geq";
    case BinOpKind::NotEq: return "neq";
    case BinOpKind::Approx: return "approx";
  }
  return "?";
}

const char* big_op_name(BigOpKind op) {
  switch (op) {
    case BigOpKind::Sum: return "sum";
    case BigOpKind::Product: return "prod";
    case BigOpKind::Integral: return "int";
    case BigOpKind::Limit: return "lim";
  }
  return "?";
}

nlohmann::json node_to_json(const MathNode& n) {
  nlohmann::json j;
  j["kind"] = kind_name(n.kind);
  if (!n.text.empty()) j["text"] = n.text;
  if (n.kind == AstKind::BinOp) j["op"] = bin_op_name(n.op);
  if (n.kind == AstKind::BigOp) {
    j["op"] = big_op_name(n.big);
    j["has_lower"] = n.has_lower;
    j["has_upper"] = n.has_upper;
  }
  if (n.kind == AstKind::Sqrt) j["has_degree"] = n.has_degree;
  if (n.kind == AstKind::Group &&
      (!n.fence_open.empty() || !n.fence_close.empty())) {
    j["fence_open"] = n.fence_open;
    j["fence_close"] = n.fence_close;
  }
  if (!n.children.empty()) {
    nlohmann::json kids = nlohmann::json::array();
    for (const MathNode& c : n.children) kids.push_back(node_to_json(c));
    j["children"] = std::move(kids);
  }
  return j;
}

}  // namespace

std::string ast_to_latex(const MathNode& ast) {
  std::string out;
  print_node(ast, out);
  return out;
}

std::string ast_to_json(const MathNode& ast) {
  return node_to_json(ast).dump(2);
}

const std::vector<std::string>& known_function_names() {
  static const std::vector<std::string> v = {
      "arccos", "arcsin", "arctan", "cos", "cosh", "cot", "csc",
      "det",    "exp",    "gcd",    "ln",  "log",  "max", "min",
      "sec",    "sin",    "sinh",   "tan", "tanh"};
  return v;
}

const std::vector<std::string>& known_symbol_commands() {
  static const std::vector<std::string> v = {
      // Greek letters.
      "alpha", "beta", "gamma", "delta", "epsilon", "varepsilon", "zeta",
      "eta", "theta", "vartheta", "iota", "kappa", "lambda", "mu", "nu", "xi",
      "pi", "varpi", "rho", "varrho", "sigma", "varsigma", "tau", "upsilon",
      "phi", "varphi", "chi", "psi", "omega", "Gamma", "Delta", "Theta",
      "Lambda", "Xi", "Pi", "Sigma", "Upsilon", "Phi", "Psi", "Omega",
      // Everything else spoken by name.
      "infty", "partial", "nabla", "pm", "mp", "div", "ast", "star", "circ",
      "bullet", "degree", "prime", "ell", "hbar", "emptyset", "in", "notin",
      "ni", "subset", "supset", "subseteq", "supseteq", "cup", "cap",
      "setminus", "equiv", "sim", "simeq", "cong", "propto", "perp",
      "parallel", "angle", "forall", "exists", "neg", "lor", "land", "oplus",
      "otimes", "dagger", "ldots", "cdots", "dots", "to", "rightarrow",
      "leftarrow", "longrightarrow", "Rightarrow", "Leftarrow",
      "leftrightarrow", "Leftrightarrow", "mapsto", "uparrow", "downarrow",
      "vert", "Vert", "backslash", "lbrace", "rbrace", "langle", "rangle",
      "lfloor", "rfloor", "lceil", "rceil", "mid", "aleph", "Re", "Im",
      "top", "bot"};
  return v;
}

const std::vector<std::string>& known_big_op_commands() {
  static const std::vector<std::string> v = {"int", "lim", "prod", "sum"};
  return v;
}

}  // namespace mathreader
