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

#include "mathreader/segmenter.hpp"

#include <stdexcept>

#include "json.hpp"

namespace mathreader {

namespace {

std::string_view kind_name(SegmentKind k) {
  switch (k) {
    case SegmentKind::Prose: return "prose";
    case SegmentKind::InlineMath: return "inline_math";
    case SegmentKind::DisplayMath: return "display_math";
  }
  return "prose";
}

std::string_view delimiter_name(MathDelimiter d) {
  switch (d) {
    case MathDelimiter::None: return "none";
    case MathDelimiter::ParenBackslash: return "paren_backslash";
    case MathDelimiter::BracketBackslash: return "bracket_backslash";
    case MathDelimiter::SingleDollar: return "single_dollar";
    case MathDelimiter::DoubleDollar: return "double_dollar";
  }
  return "none";
}

// Finds the closer "\<close_char>" at or after `from`, honouring backslash
// escapes inside the region. Returns npos if the region never closes.
std::size_t find_backslash_closer(std::string_view s, std::size_t from,
                                  char close_char) {
  std::size_t i = from;
  while (i < s.size()) {
    if (s[i] == '\\') {
      if (i + 1 < s.size() && s[i + 1] == close_char) return i;
      i += 2;  // escaped pair, including "\\"
      continue;
    }
    ++i;
  }
  return std::string_view::npos;
}

// Finds the next unescaped "$" (want_double=false) or "$$" (true).
std::size_t find_dollar_closer(std::string_view s, std::size_t from,
                               bool want_double) {
  std::size_t i = from;
  while (i < s.size()) {
    if (s[i] == '\\') {
      i += 2;
      continue;
    }
    if (s[i] == '$') {
      if (!want_double) return i;
      if (i + 1 < s.size() && s[i + 1] == '$') return i;
      ++i;
      continue;
    }
    ++i;
  }
  return std::string_view::npos;
}

struct MathHit {
  std::size_t open_begin;   // first byte of the opening delimiter
  std::size_t content_begin;
  std::size_t content_end;
  std::size_t close_end;    // one past the closing delimiter
  SegmentKind kind;
  MathDelimiter delimiter;
};

// Tries to match a math region whose opening delimiter starts at `i`.
bool match_math(std::string_view s, std::size_t i, MathHit* hit) {
  if (s[i] == '\\' && i + 1 < s.size() && (s[i + 1] == '(' || s[i + 1] == '[')) {
    const bool inline_kind = s[i + 1] == '(';
    const char closer = inline_kind ? ')' : ']';
    const std::size_t close = find_backslash_closer(s, i + 2, closer);
    if (close == std::string_view::npos) return false;
    *hit = {i, i + 2, close, close + 2,
            inline_kind ? SegmentKind::InlineMath : SegmentKind::DisplayMath,
            inline_kind ? MathDelimiter::ParenBackslash
                        : MathDelimiter::BracketBackslash};
    return true;
  }
  if (s[i] == '$') {
    const bool dbl = i + 1 < s.size() && s[i + 1] == '$';  // longest match
    const std::size_t open_len = dbl ? 2 : 1;
    const std::size_t close = find_dollar_closer(s, i + open_len, dbl);
    if (close == std::string_view::npos) return false;
    *hit = {i, i + open_len, close, close + open_len,
            dbl ? SegmentKind::DisplayMath : SegmentKind::InlineMath,
            dbl ? MathDelimiter::DoubleDollar : MathDelimiter::SingleDollar};
    return true;
  }
  return false;
}

}  // namespace

std::string_view delimiter_open(MathDelimiter d) {
  switch (d) {
    case MathDelimiter::None: return "";
    case MathDelimiter::ParenBackslash: return "\\(";
    case MathDelimiter::BracketBackslash: return "\\[";
    case MathDelimiter::SingleDollar: return "$";
    case MathDelimiter::DoubleDollar: return "$$";
  }
  return "";
}

std::string_view delimiter_close(MathDelimiter d) {
  switch (d) {
    case MathDelimiter::None: return "";
    case MathDelimiter::ParenBackslash: return "\\)";
    case MathDelimiter::BracketBackslash: return "\\]";
    case MathDelimiter::SingleDollar: return "$";
    case MathDelimiter::DoubleDollar: return "$$";
  }
  return "";
}

SegmentedDocument segment(std::string_view source) {
  SegmentedDocument doc;
  doc.source.assign(source);

  std::size_t prose_begin = 0;
  std::size_t i = 0;
  auto flush_prose = [&](std::size_t upto) {
    if (upto > prose_begin) {
      Segment seg;
      seg.kind = SegmentKind::Prose;
      seg.raw.assign(source.substr(prose_begin, upto - prose_begin));
      seg.begin = prose_begin;
      seg.end = upto;
      seg.delimiter = MathDelimiter::None;
      doc.segments.push_back(std::move(seg));
    }
  };

  while (i < source.size()) {
    const char c = source[i];
    if (c == '\\') {
      if (i + 1 < source.size() && (source[i + 1] == '(' || source[i + 1] == '[')) {
        MathHit hit;
        if (match_math(source, i, &hit)) {
          flush_prose(hit.open_begin);
          Segment seg;
          seg.kind = hit.kind;
          seg.raw.assign(
              source.substr(hit.content_begin, hit.content_end - hit.content_begin));
          seg.begin = hit.open_begin;
          seg.end = hit.close_end;
          seg.delimiter = hit.delimiter;
          doc.segments.push_back(std::move(seg));
          i = hit.close_end;
          prose_begin = i;
          continue;
        }
        // Unmatched opener degrades to prose.
        i += 2;
        continue;
      }
      // Escaped pair stays prose; \$ is never a delimiter.
      i += 2;
      if (i > source.size()) i = source.size();
      continue;
    }
    if (c == '$') {
      MathHit hit;
      if (match_math(source, i, &hit)) {
        flush_prose(hit.open_begin);
        Segment seg;
        seg.kind = hit.kind;
        seg.raw.assign(
            source.substr(hit.content_begin, hit.content_end - hit.content_begin));
        seg.begin = hit.open_begin;
        seg.end = hit.close_end;
        seg.delimiter = hit.delimiter;
        doc.segments.push_back(std::move(seg));
        i = hit.close_end;
        prose_begin = i;
        continue;
      }
      // Unmatched $ or $$: consume the opener as prose and move on.
      i += (i + 1 < source.size() && source[i + 1] == '$') ? 2 : 1;
      continue;
    }
    ++i;
  }
  flush_prose(source.size());
  return doc;
}

std::string reassemble(const SegmentedDocument& doc,
                       const std::map<std::size_t, std::string>& replacements) {
  for (const auto& [index, text] : replacements) {
    (void)text;
    if (index >= doc.segments.size() || !doc.segments[index].is_math()) {
      throw std::invalid_argument(
          "reassemble: replacement index " + std::to_string(index) +
          " does not name a math segment");
    }
  }
  std::string out;
  out.reserve(doc.source.size());
  for (std::size_t idx = 0; idx < doc.segments.size(); ++idx) {
    const Segment& seg = doc.segments[idx];
    const auto it = replacements.find(idx);
    if (it != replacements.end()) {
      out += it->second;
    } else {
      out.append(doc.source, seg.begin, seg.end - seg.begin);
    }
  }
  return out;
}

std::string segments_to_json(const SegmentedDocument& doc) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Segment& seg : doc.segments) {
    arr.push_back({{"kind", kind_name(seg.kind)},
                   {"raw", seg.raw},
                   {"span", {seg.begin, seg.end}},
                   {"delimiter", delimiter_name(seg.delimiter)}});
  }
  return arr.dump(2);
}

}  // namespace mathreader
