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

#ifndef MATHREADER_SEGMENTER_HPP
#define MATHREADER_SEGMENTER_HPP

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mathreader {

enum class SegmentKind { Prose, InlineMath, DisplayMath };

enum class MathDelimiter {
  None,             // prose
  ParenBackslash,   // \( ... \)
  BracketBackslash, // \[ ... \]
  SingleDollar,     // $ ... $
  DoubleDollar      // $$ ... $$
};

// One contiguous span of the source document. For math kinds `raw` holds the
// content between the delimiters; for prose it is the verbatim source slice.
// [begin, end) are byte offsets into the source, delimiters included.
struct Segment {
  SegmentKind kind = SegmentKind::Prose;
  std::string raw;
  std::size_t begin = 0;
  std::size_t end = 0;
  MathDelimiter delimiter = MathDelimiter::None;

  bool is_math() const { return kind != SegmentKind::Prose; }
};

struct SegmentedDocument {
  std::string source;
  std::vector<Segment> segments;
};

std::string_view delimiter_open(MathDelimiter d);
std::string_view delimiter_close(MathDelimiter d);

// Splits a document into prose and math segments. Total: unmatched or
// malformed delimiters degrade to prose, never an error. Segment spans
// partition [0, source.size()).
SegmentedDocument segment(std::string_view source);

// Concatenates segments in order. Math segments whose index appears in
// `replacements` are substituted by the replacement string with delimiters
// dropped; everything else is rendered verbatim from the source, so an empty
// map reproduces the source byte for byte.
//
// Throws std::invalid_argument naming the index if a key does not refer to a
// math segment.
std::string reassemble(const SegmentedDocument& doc,
                       const std::map<std::size_t, std::string>& replacements);

// JSON array of {kind, raw, span: [begin, end], delimiter}.
std::string segments_to_json(const SegmentedDocument& doc);

}  // namespace mathreader

#endif  // MATHREADER_SEGMENTER_HPP
