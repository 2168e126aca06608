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

#include "mathreader/math_ast.hpp"

#include <utility>

namespace mathreader {

bool MathNode::is_empty() const {
  if (is_leaf()) return false;
  if (kind == AstKind::BinOp) return false;
  for (const MathNode& child : children) {
    if (!child.is_empty()) return false;
  }
  return true;
}

bool MathNode::contains_opaque() const {
  if (kind == AstKind::Opaque) return true;
  for (const MathNode& child : children) {
    if (child.contains_opaque()) return true;
  }
  return false;
}

MathNode make_seq(std::vector<MathNode> children) {
  MathNode n;
  n.kind = AstKind::Sequence;
  n.children = std::move(children);
  return n;
}

MathNode make_sym(std::string name) {
  MathNode n;
  n.kind = AstKind::Sym;
  n.text = std::move(name);
  return n;
}

MathNode make_num(std::string digits) {
  MathNode n;
  n.kind = AstKind::Num;
  n.text = std::move(digits);
  return n;
}

MathNode make_bin_op(BinOpKind op) {
  MathNode n;
  n.kind = AstKind::BinOp;
  n.op = op;
  return n;
}

MathNode make_frac(MathNode numerator, MathNode denominator) {
  MathNode n;
  n.kind = AstKind::Frac;
  n.children.push_back(std::move(numerator));
  n.children.push_back(std::move(denominator));
  return n;
}

MathNode make_power(MathNode base, MathNode exponent) {
  MathNode n;
  n.kind = AstKind::Power;
  n.children.push_back(std::move(base));
  n.children.push_back(std::move(exponent));
  return n;
}

MathNode make_subscript(MathNode base, MathNode sub) {
  MathNode n;
  n.kind = AstKind::Sub;
  n.children.push_back(std::move(base));
  n.children.push_back(std::move(sub));
  return n;
}

MathNode make_big_op(BigOpKind big, MathNode lower, bool has_lower,
                     MathNode upper, bool has_upper, MathNode body) {
  MathNode n;
  n.kind = AstKind::BigOp;
  n.big = big;
  n.has_lower = has_lower;
  n.has_upper = has_upper;
  n.children.push_back(has_lower ? std::move(lower) : make_seq());
  n.children.push_back(has_upper ? std::move(upper) : make_seq());
  n.children.push_back(std::move(body));
  return n;
}

MathNode make_func(std::string name, MathNode argument) {
  MathNode n;
  n.kind = AstKind::Func;
  n.text = std::move(name);
  n.children.push_back(std::move(argument));
  return n;
}

MathNode make_sqrt(MathNode radicand) {
  MathNode n;
  n.kind = AstKind::Sqrt;
  n.has_degree = false;
  n.children.push_back(make_seq());
  n.children.push_back(std::move(radicand));
  return n;
}

MathNode make_sqrt(MathNode degree, MathNode radicand) {
  MathNode n;
  n.kind = AstKind::Sqrt;
  n.has_degree = true;
  n.children.push_back(std::move(degree));
  n.children.push_back(std::move(radicand));
  return n;
}

MathNode make_group(MathNode content, std::string fence_open,
                    std::string fence_close) {
  MathNode n;
  n.kind = AstKind::Group;
  n.fence_open = std::move(fence_open);
  n.fence_close = std::move(fence_close);
  n.children.push_back(std::move(content));
  return n;
}

MathNode make_opaque(std::string raw) {
  MathNode n;
  n.kind = AstKind::Opaque;
  n.text = std::move(raw);
  return n;
}

}  // namespace mathreader
