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

#ifndef MATHREADER_EVAL_HPP
#define MATHREADER_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mathreader {

// Text normalization applied to both sides before scoring. The homophone map
// folds spelled-out symbol names back to symbols ("why" -> "y") on whole
// words; it is canonicalized at load so substitution chains cannot break
// normalize's idempotence.
struct NormalizationConfig {
  bool lowercase = true;
  bool strip_punctuation = true;
  bool collapse_whitespace = true;
  std::unordered_map<std::string, std::string> homophones;

  static NormalizationConfig defaults();  // homophones: why->y, tee->t
  static NormalizationConfig none();      // everything off

  // Adds `from to` pairs (lowercase single words) from a file; # comments.
  // Throws std::runtime_error on unreadable files or malformed entries.
  void load_homophones(const std::string& path);
  void add_homophone(const std::string& from, const std::string& to);
};

// Idempotent: lowercase, strip punctuation, collapse whitespace, then
// homophone substitution, each gated by the config.
std::string normalize(std::string_view text, const NormalizationConfig& cfg);

struct AlignmentCounts {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;   // reference tokens missing from hypothesis
  std::size_t insertions = 0;  // extra hypothesis tokens

  std::size_t distance() const { return substitutions + deletions + insertions; }
};

// Minimum-cost alignment counts under unit costs, via dynamic programming.
// Ties in the backtrace prefer the diagonal (match/substitution), then
// deletion, then insertion, so counts are deterministic.
AlignmentCounts align_sequences(const std::vector<std::string>& reference,
                                const std::vector<std::string>& hypothesis);
AlignmentCounts align_sequences(const std::vector<uint32_t>& reference,
                                const std::vector<uint32_t>& hypothesis);

// One rate measurement. valid=false (with error set) when the normalized
// reference is empty and the rate is undefined.
struct RateReport {
  bool valid = false;
  std::string error;
  double rate = 0.0;
  AlignmentCounts counts;
  std::size_t reference_length = 0;
};

RateReport wer(std::string_view reference, std::string_view hypothesis,
               const NormalizationConfig& cfg);
RateReport cer(std::string_view reference, std::string_view hypothesis,
               const NormalizationConfig& cfg);

struct DocumentScore {
  std::string id;
  RateReport words;
  RateReport chars;
};

// Corpus rates pool counts across documents (sum of errors over sum of
// reference lengths), never averaging per-document rates.
struct EvalReport {
  double wer = 0.0;
  double cer = 0.0;
  AlignmentCounts word_counts;
  AlignmentCounts char_counts;
  std::size_t reference_words = 0;
  std::size_t reference_chars = 0;
  std::size_t scored_documents = 0;
  std::vector<DocumentScore> documents;
  std::vector<std::string> warnings;  // skipped documents etc.

  std::string to_json() const;
  std::string to_table() const;  // document | WER | CER rows plus corpus row
};

struct CorpusPair {
  std::string id;
  std::string ref_path;
  std::string hyp_path;
};

EvalReport eval_corpus(const std::vector<CorpusPair>& pairs,
                       const NormalizationConfig& cfg);

// Scores in-memory texts (same pooling); used when the hypotheses come
// straight from the pipeline.
EvalReport eval_texts(
    const std::vector<std::pair<std::string, std::string>>& ref_hyp,
    const NormalizationConfig& cfg);

// JSON list of {"ref": path, "hyp": path, "id": string}. Relative paths are
// resolved against the manifest's directory. Throws std::runtime_error with
// the offending path on I/O or schema errors.
std::vector<CorpusPair> load_manifest(const std::string& path);

}  // namespace mathreader

#endif  // MATHREADER_EVAL_HPP
