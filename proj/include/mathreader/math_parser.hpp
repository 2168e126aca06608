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

#ifndef MATHREADER_MATH_PARSER_HPP
#define MATHREADER_MATH_PARSER_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "mathreader/math_ast.hpp"

namespace mathreader {

enum class TokenKind {
  Command,     // backslash + maximal alphabetic run, or backslash + one char
  Symbol,      // single character (one UTF-8 code point)
  Number,      // maximal digit/decimal run
  OpenBrace,
  CloseBrace,
  Subscript,   // _
  Superscript, // ^
  Ampersand,
  Whitespace   // maximal whitespace run
};

// `text` is the verbatim source slice, so concatenating token texts
// reproduces the input exactly.
struct MathToken {
  TokenKind kind = TokenKind::Symbol;
  std::string text;
  std::size_t offset = 0;

  // Command name without the leading backslash.
  std::string_view name() const {
    std::string_view v = text;
    if (!v.empty() && v.front() == '\\') v.remove_prefix(1);
    return v;
  }
};

// Total for any input.
std::vector<MathToken> tokenize(std::string_view latex);

// Total: recognized constructs become structured nodes, everything else an
// Opaque wrapping the verbatim source slice. Never throws.
MathNode parse(const std::vector<MathToken>& tokens);

MathNode parse_latex(std::string_view latex);

// Canonical printer. For Opaque-free trees built from parser-reachable
// shapes, parse_latex(ast_to_latex(a)) is structurally equal to a.
std::string ast_to_latex(const MathNode& ast);

// Debug dump: node kind plus children, as JSON.
std::string ast_to_json(const MathNode& ast);

// Command inventories backing the grammar, exposed so the verbalizer's rule
// table can be checked for coverage.
const std::vector<std::string>& known_function_names();
const std::vector<std::string>& known_symbol_commands();  // Greek + misc
const std::vector<std::string>& known_big_op_commands();

}  // namespace mathreader

#endif  // MATHREADER_MATH_PARSER_HPP
