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

#ifndef MATHREADER_MATH_AST_HPP
#define MATHREADER_MATH_AST_HPP

#include <string>
#include <vector>

namespace mathreader {

enum class AstKind {
  Sequence, // ordered children
  Sym,      // named symbol; text = name ("x", "alpha", "(")
  Num,      // digit/decimal run; text = digits
  BinOp,    // infix operator standing between its Sequence neighbours
  Frac,     // children = [numerator, denominator]
  Power,    // children = [base, exponent]
  Sub,      // children = [base, subscript]
  BigOp,    // children = [lower, upper, body]; has_lower/has_upper gate 0,1
  Func,     // named function; text = name; children = [argument]
  Sqrt,     // children = [degree, radicand]; has_degree gates 0
  Group,    // children = [content]; fence_open/fence_close name the fences
  Opaque    // unrecognized construct kept verbatim; text = raw slice
};

enum class BinOpKind {
  Plus, Minus, Times, Equals, Less, Greater, LessEq, GreaterEq, NotEq, Approx
};

enum class BigOpKind { Sum, Product, Integral, Limit };

// Tree node for one parsed math expression. Leaves are Sym, Num, or Opaque.
// Construct through the factories below so unused fields stay normalized and
// operator== means structural equality.
struct MathNode {
  AstKind kind = AstKind::Sequence;
  std::string text;
  BinOpKind op = BinOpKind::Plus;
  BigOpKind big = BigOpKind::Sum;
  std::string fence_open;
  std::string fence_close;
  bool has_lower = false;
  bool has_upper = false;
  bool has_degree = false;
  std::vector<MathNode> children;

  bool operator==(const MathNode&) const = default;

  bool is_leaf() const {
    return kind == AstKind::Sym || kind == AstKind::Num ||
           kind == AstKind::Opaque;
  }
  // True when the subtree contains no Sym/Num/Opaque leaf (nothing to speak).
  bool is_empty() const;
  bool contains_opaque() const;
};

MathNode make_seq(std::vector<MathNode> children = {});
MathNode make_sym(std::string name);
MathNode make_num(std::string digits);
MathNode make_bin_op(BinOpKind op);
MathNode make_frac(MathNode numerator, MathNode denominator);
MathNode make_power(MathNode base, MathNode exponent);
MathNode make_subscript(MathNode base, MathNode sub);
MathNode make_big_op(BigOpKind big, MathNode lower, bool has_lower,
                     MathNode upper, bool has_upper, MathNode body);
MathNode make_func(std::string name, MathNode argument);
MathNode make_sqrt(MathNode radicand);
MathNode make_sqrt(MathNode degree, MathNode radicand);
MathNode make_group(MathNode content, std::string fence_open = "",
                    std::string fence_close = "");
MathNode make_opaque(std::string raw);

}  // namespace mathreader

#endif  // MATHREADER_MATH_AST_HPP
