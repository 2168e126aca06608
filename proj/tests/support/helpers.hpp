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

#ifndef MATHREADER_TESTS_SUPPORT_HELPERS_HPP
#define MATHREADER_TESTS_SUPPORT_HELPERS_HPP

#include <cstddef>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "mathreader/math_ast.hpp"
#include "mathreader/math_parser.hpp"

namespace mathreader::test {

#ifdef MATHREADER_DATA_DIR
inline std::string data_dir() { return MATHREADER_DATA_DIR; }
#endif
#ifdef MATHREADER_CLI_PATH
inline std::string cli_path() { return MATHREADER_CLI_PATH; }
#endif

// Plain memoized recursion, deliberately unrelated to the DP in the library.
template <typename T>
std::size_t brute_edit_distance(const std::vector<T>& a,
                                const std::vector<T>& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  struct Rec {
    const std::vector<T>& a;
    const std::vector<T>& b;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t>& memo;
    std::size_t go(std::size_t i, std::size_t j) {
      if (i == a.size()) return b.size() - j;
      if (j == b.size()) return a.size() - i;
      const auto key = std::make_pair(i, j);
      const auto it = memo.find(key);
      if (it != memo.end()) return it->second;
      std::size_t best = go(i + 1, j + 1) + (a[i] == b[j] ? 0 : 1);
      best = std::min(best, go(i + 1, j) + 1);
      best = std::min(best, go(i, j + 1) + 1);
      memo[key] = best;
      return best;
    }
  };
  Rec rec{a, b, memo};
  return rec.go(0, 0);
}

// Random documents that stress the segmenter: delimiter soup, escapes,
// multibyte characters, unmatched openers.
inline std::string random_document(std::mt19937& rng, std::size_t max_len) {
  static const std::vector<std::string> pieces = {
      "a",  "b",    "x",  " ",    "\n",  "\t", "1",    ".",   ",",  "#",
      "$",  "$$",   "\\$", "\\(", "\\)", "\\[", "\\]", "\\\\", "{",  "}",
      "^",  "_",    "&",  "\\frac{1}{2}", "\\alpha", "pi",    "π",
      "café",  "$x$", "word", "\\( y \\)", "e=mc^2"};
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  const std::size_t target = len(rng);
  std::string doc;
  while (doc.size() < target) doc += pieces[pick(rng)];
  return doc;
}

// Random LaTeX-ish formulas for totality and no-skip fuzzing. Balancedness
// is not guaranteed on purpose.
inline std::string random_formula(std::mt19937& rng, std::size_t max_len) {
  static const std::vector<std::string> pieces = {
      "x",      "y",       "1",     "42",    "3.14",   "+",      "-",
      "=",      "<",       ">",     "{",     "}",      "^",      "_",
      "&",      " ",       "(",     ")",     "[",      "]",      "|",
      "\\frac", "\\sqrt",  "\\sum", "\\int", "\\lim",  "\\prod", "\\alpha",
      "\\sin",  "\\cos",   "\\log", "\\left(", "\\right)", "\\left\\{",
      "\\right\\}", "\\nosuchcmd", "\\text{hi}", "\\,", "\\\\",  "\\{",
      "\\}",    "\\$",     "π", "\\infty", "\\cdot", "\\leq"};
  if (max_len == 0) return "";
  std::uniform_int_distribution<std::size_t> pick(0, pieces.size() - 1);
  std::uniform_int_distribution<std::size_t> len(1, max_len);
  const std::size_t target = len(rng);
  std::string formula;
  while (formula.size() < target) formula += pieces[pick(rng)];
  return formula;
}

// Random Opaque-free ASTs restricted to shapes the printer and parser map
// onto each other one-to-one. Containers hold at most one level of Sequence
// and big operators always get a nonempty single-item body.
class AstGenerator {
 public:
  explicit AstGenerator(std::mt19937& rng) : rng_(rng) {}

  MathNode node(int depth) {
    if (depth <= 0) return leaf();
    switch (dist(0, 8)) {
      case 0: return leaf();
      case 1: return make_frac(slot(depth - 1), slot(depth - 1));
      case 2: return make_power(base(depth - 1), slot(depth - 1));
      case 3: return make_subscript(base(depth - 1), slot(depth - 1));
      case 4: return big_op(depth);
      case 5: return func(depth);
      case 6: return sqrt(depth);
      case 7: return group(depth);
      default: return leaf();
    }
  }

  // Top-level shape: single node or a flat sequence.
  MathNode top(int depth) {
    if (dist(0, 1) == 0) return node(depth);
    std::vector<MathNode> children;
    const int n = dist(2, 4);
    for (int i = 0; i < n; ++i) children.push_back(node(depth - 1));
    return make_seq(std::move(children));
  }

 private:
  int dist(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  MathNode leaf() {
    switch (dist(0, 3)) {
      case 0: {
        static const std::string letters = "abcdefghkmnpqrstuvwxyz";
        return make_sym(std::string(1, letters[static_cast<std::size_t>(
                               dist(0, static_cast<int>(letters.size()) - 1))]));
      }
      case 1: {
        const auto& syms = known_symbol_commands();
        return make_sym(syms[static_cast<std::size_t>(
            dist(0, static_cast<int>(syms.size()) - 1))]);
      }
      case 2: {
        static const std::vector<std::string> nums = {"0", "1", "2", "42",
                                                      "3.14", "100"};
        return make_num(nums[static_cast<std::size_t>(
            dist(0, static_cast<int>(nums.size()) - 1))]);
      }
      default:
        return make_bin_op(static_cast<BinOpKind>(dist(0, 9)));
    }
  }

  // Anything a braced slot can hold: one node or a flat sequence.
  MathNode slot(int depth) {
    if (depth <= 0 || dist(0, 2) > 0) return node(depth);
    std::vector<MathNode> children;
    const int n = dist(2, 3);
    for (int i = 0; i < n; ++i) children.push_back(node(depth - 1));
    return make_seq(std::move(children));
  }

  // Bases of ^ and _ must re-bind to the same node on parse.
  MathNode base(int depth) {
    switch (dist(0, 3)) {
      case 0: return leaf_atom();
      case 1: return make_frac(slot(depth), slot(depth));
      case 2: return group(depth);
      default: return leaf_atom();
    }
  }

  MathNode leaf_atom() {
    MathNode n = leaf();
    while (n.kind == AstKind::BinOp) n = leaf();
    return n;
  }

  MathNode big_op(int depth) {
    const auto op = static_cast<BigOpKind>(dist(0, 3));
    const bool has_lower = dist(0, 1) == 1;
    const bool has_upper = dist(0, 1) == 1;
    return make_big_op(op, has_lower ? slot(depth - 1) : make_seq(), has_lower,
                       has_upper ? slot(depth - 1) : make_seq(), has_upper,
                       leaf_atom());
  }

  MathNode func(int depth) {
    const auto& names = known_function_names();
    std::string name = names[static_cast<std::size_t>(
        dist(0, static_cast<int>(names.size()) - 1))];
    MathNode arg = slot(depth - 1);
    while (arg.is_empty()) arg = leaf_atom();
    return make_func(std::move(name), std::move(arg));
  }

  MathNode sqrt(int depth) {
    if (dist(0, 1) == 0) return make_sqrt(slot(depth - 1));
    return make_sqrt(slot(depth - 1), slot(depth - 1));
  }

  MathNode group(int depth) {
    static const std::vector<std::pair<std::string, std::string>> fences = {
        {"", ""}, {"(", ")"}, {"[", "]"}, {"|", "|"}};
    const auto& [open, close] =
        fences[static_cast<std::size_t>(dist(0, 3))];
    return make_group(slot(depth - 1), open, close);
  }

  std::mt19937& rng_;
};

// Minimal XML well-formedness check: balanced tags, no raw `<` in text,
// `&` only as one of the three escapes used for SSML.
inline bool xml_well_formed(const std::string& xml) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  while (i < xml.size()) {
    if (xml[i] == '<') {
      const std::size_t end = xml.find('>', i);
      if (end == std::string::npos) return false;
      std::string tag = xml.substr(i + 1, end - i - 1);
      if (tag.empty()) return false;
      if (tag[0] == '?') {
        if (tag.back() != '?') return false;
      } else if (tag[0] == '/') {
        if (stack.empty()) return false;
        std::string name = tag.substr(1);
        if (stack.back() != name) return false;
        stack.pop_back();
      } else if (tag.back() == '/') {
        // self-closing, nothing to track
      } else {
        std::string name = tag.substr(0, tag.find_first_of(" \t"));
        stack.push_back(name);
      }
      i = end + 1;
      continue;
    }
    if (xml[i] == '>') return false;
    if (xml[i] == '&') {
      if (xml.compare(i, 5, "&amp;") != 0 && xml.compare(i, 4, "&lt;") != 0 &&
          xml.compare(i, 4, "&gt;") != 0) {
        return false;
      }
    }
    ++i;
  }
  return stack.empty();
}

// Removes every <...> tag and undoes the three escapes; the inverse of what
// emit_ssml adds around the final text.
inline std::string strip_xml_tags(const std::string& xml) {
  std::string text;
  std::size_t i = 0;
  while (i < xml.size()) {
    if (xml[i] == '<') {
      const std::size_t end = xml.find('>', i);
      if (end == std::string::npos) break;
      i = end + 1;
      continue;
    }
    if (xml.compare(i, 5, "&amp;") == 0) {
      text += '&';
      i += 5;
    } else if (xml.compare(i, 4, "&lt;") == 0) {
      text += '<';
      i += 4;
    } else if (xml.compare(i, 4, "&gt;") == 0) {
      text += '>';
      i += 4;
    } else {
      text += xml[i++];
    }
  }
  return text;
}

}  // namespace mathreader::test

#endif  // MATHREADER_TESTS_SUPPORT_HELPERS_HPP
