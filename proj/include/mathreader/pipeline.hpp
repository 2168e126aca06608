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

#ifndef MATHREADER_PIPELINE_HPP
#define MATHREADER_PIPELINE_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mathreader/segmenter.hpp"
#include "mathreader/translator.hpp"
#include "mathreader/verbalizer.hpp"

namespace mathreader {

enum class OutputFormat { PlainText, Ssml };

// Stage labels used in timing reports.
inline constexpr const char* kStageOcr = "OCR";
inline constexpr const char* kStageSeparate = "Seperate LaTeX";
inline constexpr const char* kStageTranslate = "Translate and Replace";
inline constexpr const char* kStageTts = "TTS";

struct PipelineConfig {
  TranslatorBackend backend = TranslatorBackend::rule_based();
  VerbalizationRules rules = VerbalizationRules::defaults();
  OutputFormat format = OutputFormat::PlainText;
  bool voice_fences = false;
  bool verbose_grouping = false;
  // Optional hook templates. TTS: {input} = text file, {output} = wav path,
  // run once per document. OCR: {input} = source document, {output} = mmd.
  std::string tts_command;
  std::string ocr_command;
  std::string tts_output_path;  // wav destination when the TTS hook runs
  int parallelism = 1;
};

// Wall-clock seconds per executed stage, in execution order, plus the
// end-to-end total.
struct StageTiming {
  std::vector<std::pair<std::string, double>> stages;
  double total = 0.0;

  // Seconds for a named stage, or -1 when the stage did not run.
  double stage_seconds(std::string_view name) const;
  double stages_sum() const;
  std::string to_json() const;  // {"stages": {name: seconds}, "total": s}
  std::string to_table(bool mark_hooks = true) const;
};

// Ordered pieces of the final text; math chunks carry the inserted
// verbalization (post casing/spacing), prose chunks the cleaned prose.
struct PipelineChunk {
  bool is_math = false;
  std::string text;
};

struct PipelineResult {
  std::string final_text;
  // (segment index into the SegmentedDocument, translation) per math segment,
  // in document order.
  std::vector<std::pair<std::size_t, TranslationResult>> segment_results;
  StageTiming timing;
  int degraded_count = 0;
  std::vector<PipelineChunk> chunks;
  SegmentedDocument document;
  std::string tts_output_path;  // set when the TTS hook ran
};

// Error with stage attribution, thrown for unreadable inputs and failing
// external hooks. Translation failures never surface here; the translator
// falls back instead.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& message)
      : std::runtime_error(message), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// Orchestrates segment -> translate -> replace -> reassemble and the
// optional TTS hook, collecting per-stage timings.
class Pipeline {
 public:
  explicit Pipeline(PipelineConfig config);

  PipelineResult run(std::string_view document) const;

  // Ablation arm: math segments pass through delimiter-stripped but raw
  // (no verbalization).
  PipelineResult run_without_translator(std::string_view document) const;

  const PipelineConfig& config() const { return config_; }

 private:
  PipelineResult execute(std::string_view document, bool translate) const;

  PipelineConfig config_;
  VerbalizationRules effective_rules_;
};

// Reads (or OCR-hooks) a document file, then runs the pipeline. The OCR hook
// time is prepended to the timing report as its own stage.
PipelineResult run_document_file(const std::string& path,
                                 const PipelineConfig& config,
                                 bool translate = true);

// Well-formed SSML for a plain-text result; formula spans are wrapped in
// sentence elements. Stripping the tags yields final_text exactly.
std::string emit_ssml(const PipelineResult& result);

}  // namespace mathreader

#endif  // MATHREADER_PIPELINE_HPP
