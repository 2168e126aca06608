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

#ifndef MATHREADER_VERBALIZER_HPP
#define MATHREADER_VERBALIZER_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mathreader/math_ast.hpp"

namespace mathreader {

// Spoken rendering of a formula: lowercase words separated by single spaces,
// free of LaTeX markup characters. fallback_spans records every stretch that
// was produced by the opaque character-naming fallback rather than a rule.
struct SpokenText {
  struct FallbackSpan {
    std::size_t word_begin = 0;  // [word_begin, word_end) into the word list
    std::size_t word_end = 0;
    std::string source;          // original opaque text
  };

  std::string text;
  std::vector<FallbackSpan> fallback_spans;

  bool empty() const { return text.empty(); }
};

// Pronunciation tables keyed by namespaced entries ("func.cos", "greek.pi",
// "rel.equals", ...). defaults() carries a complete table for every construct
// the parser recognizes; a plain-text data file can override or extend it
// without rebuilding (one `key = phrase` mapping per line, # comments).
struct VerbalizationRules {
  std::unordered_map<std::string, std::string> entries;
  bool voice_fences = false;      // speak parentheses as "open paren" etc.
  bool verbose_grouping = false;  // wrap compound operands in "the quantity"

  static VerbalizationRules defaults();

  // Overlays mappings from a rule file onto this table. Throws
  // std::runtime_error on unreadable files or malformed lines.
  void load_overrides(const std::string& path);

  // Phrase for a key; empty string when the key is silent or unknown.
  std::string_view phrase(std::string_view key) const;
  bool has(std::string_view key) const;
};

// The text of the built-in rule table (same format as the data file).
std::string_view default_rules_text();

SpokenText verbalize(const MathNode& ast, const VerbalizationRules& rules);

// parse + verbalize; additionally guarantees at least one word whenever the
// input contains any non-whitespace character.
SpokenText verbalize_latex(std::string_view latex,
                           const VerbalizationRules& rules);

}  // namespace mathreader

#endif  // MATHREADER_VERBALIZER_HPP
