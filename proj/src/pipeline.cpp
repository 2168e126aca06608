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

#include "mathreader/pipeline.hpp"

#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <thread>

#include "json.hpp"
#include "mathreader/subprocess.hpp"
#include "mathreader/text_util.hpp"

namespace mathreader {

namespace {

using Clock = std::chrono::steady_clock;

// Hooks run real OCR/TTS engines, so the leash is long.
constexpr std::chrono::milliseconds kHookTimeout{600000};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

bool is_blank(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool sentence_final(char c) { return c == '.' || c == '!' || c == '?'; }

// Leading markdown heading markers are unspeakable; drop them per line.
std::string strip_heading_markers(std::string_view prose, bool at_line_start) {
  std::string out;
  out.reserve(prose.size());
  bool line_start = at_line_start;
  std::size_t i = 0;
  while (i < prose.size()) {
    if (line_start && prose[i] == '#') {
      std::size_t j = i;
      while (j < prose.size() && prose[j] == '#') ++j;
      if (j < prose.size() && prose[j] == ' ') ++j;
      i = j;
      line_start = false;
      continue;
    }
    out += prose[i];
    line_start = prose[i] == '\n';
    ++i;
  }
  return out;
}

void replace_all(std::string& text, std::string_view needle,
                 const std::string& value) {
  std::size_t at = 0;
  while ((at = text.find(needle, at)) != std::string::npos) {
    text.replace(at, needle.size(), value);
    at += value.size();
  }
}

std::string shell_quote(const std::string& s) {
  std::string quoted = "'";
  for (const char c : s) {
    if (c == '\'') {
      quoted += "'\\''";
    } else {
      quoted += c;
    }
  }
  quoted += '\'';
  return quoted;
}

std::string unique_temp_path(const char* suffix) {
  static std::atomic<unsigned> counter{0};
  const auto dir = std::filesystem::temp_directory_path();
  const auto tick = Clock::now().time_since_epoch().count();
  return (dir / ("mathreader_" + std::to_string(::getpid()) + "_" +
                 std::to_string(counter.fetch_add(1)) + "_" +
                 std::to_string(tick) + suffix))
      .string();
}

std::string describe_failure(const CommandResult& run) {
  if (run.spawn_failed) return "could not spawn command";
  if (run.timed_out) return "command timed out";
  if (run.signaled) return "command killed by a signal";
  std::string msg = "command exited with status " + std::to_string(run.exit_code);
  if (!run.err.empty()) {
    const std::size_t nl = run.err.find('\n');
    msg += ": ";
    msg += run.err.substr(0, nl == std::string::npos ? run.err.size() : nl);
  }
  return msg;
}

}  // namespace

double StageTiming::stage_seconds(std::string_view name) const {
  for (const auto& [stage, secs] : stages) {
    if (stage == name) return secs;
  }
  return -1.0;
}

double StageTiming::stages_sum() const {
  double sum = 0.0;
  for (const auto& [stage, secs] : stages) sum += secs;
  return sum;
}

std::string StageTiming::to_json() const {
  nlohmann::json j;
  nlohmann::json named = nlohmann::json::object();
  for (const auto& [stage, secs] : stages) named[stage] = secs;
  j["stages"] = std::move(named);
  j["total"] = total;
  return j.dump(2);
}

std::string StageTiming::to_table(bool mark_hooks) const {
  auto display = [&](const std::string& name) {
    if (mark_hooks && (name == kStageOcr || name == kStageTts))
      return name + " (hook)";
    return name;
  };
  std::size_t width = 5;  // "Stage"
  for (const auto& [stage, secs] : stages)
    width = std::max(width, display(stage).size());
  width = std::max(width, std::size_t(5));

  char buf[64];
  std::string out;
  auto row = [&](const std::string& name, double secs) {
    out += name;
    out.append(width - name.size() + 2, ' ');
    std::snprintf(buf, sizeof buf, "%10.2f", secs);
    out += buf;
    out += '\n';
  };
  out += "Stage";
  out.append(width - 5 + 2, ' ');
  out += "  Time (s)\n";
  for (const auto& [stage, secs] : stages) row(display(stage), secs);
  row("Total", total);
  return out;
}

Pipeline::Pipeline(PipelineConfig config) : config_(std::move(config)) {
  if (config_.parallelism < 1) config_.parallelism = 1;
  effective_rules_ = config_.rules;
  effective_rules_.voice_fences = config_.voice_fences;
  effective_rules_.verbose_grouping = config_.verbose_grouping;
  // Validates the external command template eagerly.
  Translator probe(config_.backend, VerbalizationRules{});
  (void)probe;
}

PipelineResult Pipeline::run(std::string_view document) const {
  return execute(document, true);
}

PipelineResult Pipeline::run_without_translator(std::string_view document) const {
  return execute(document, false);
}

PipelineResult Pipeline::execute(std::string_view document,
                                 bool translate) const {
  PipelineResult result;
  const auto run_start = Clock::now();

  auto stage_start = Clock::now();
  result.document = segment(document);
  result.timing.stages.emplace_back(kStageSeparate, seconds_since(stage_start));

  stage_start = Clock::now();
  std::vector<std::size_t> math_indices;
  for (std::size_t i = 0; i < result.document.segments.size(); ++i) {
    if (result.document.segments[i].is_math()) math_indices.push_back(i);
  }

  std::vector<TranslationResult> translations(math_indices.size());
  if (translate && !math_indices.empty()) {
    const int workers = std::min<int>(config_.parallelism,
                                      static_cast<int>(math_indices.size()));
    if (workers <= 1) {
      Translator translator(config_.backend, effective_rules_);
      for (std::size_t j = 0; j < math_indices.size(); ++j) {
        translations[j] =
            translator.translate(result.document.segments[math_indices[j]].raw);
      }
    } else {
      std::atomic<std::size_t> next{0};
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers));
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          Translator translator(config_.backend, effective_rules_);
          for (;;) {
            const std::size_t j = next.fetch_add(1);
            if (j >= math_indices.size()) return;
            translations[j] = translator.translate(
                result.document.segments[math_indices[j]].raw);
          }
        });
      }
      for (std::thread& t : pool) t.join();
    }
  } else {
    for (std::size_t j = 0; j < math_indices.size(); ++j) {
      TranslationResult pass;
      pass.spoken.text = result.document.segments[math_indices[j]].raw;
      translations[j] = pass;
    }
  }

  // Replace and reassemble with sentence casing and boundary spacing.
  std::string final_text;
  std::vector<PipelineChunk> chunks;
  auto last_visible = [&]() -> char {
    for (auto it = final_text.rbegin(); it != final_text.rend(); ++it) {
      if (!is_blank(*it)) return *it;
    }
    return '\0';
  };
  std::size_t next_math = 0;
  for (std::size_t i = 0; i < result.document.segments.size(); ++i) {
    const Segment& seg = result.document.segments[i];
    if (!seg.is_math()) {
      const bool at_line_start = seg.begin == 0 ||
                                 result.document.source[seg.begin - 1] == '\n';
      std::string prose = strip_heading_markers(seg.raw, at_line_start);
      if (!final_text.empty() && !prose.empty()) {
        const char prev = final_text.back();
        const char first = prose.front();
        static constexpr std::string_view kNoSpaceAfter = ".,;:!?)]}\"'";
        if (!is_blank(prev) && !is_blank(first) &&
            kNoSpaceAfter.find(first) == std::string_view::npos &&
            chunks.back().is_math) {
          prose.insert(prose.begin(), ' ');
        }
      }
      chunks.push_back({false, std::move(prose)});
      final_text += chunks.back().text;
      continue;
    }

    TranslationResult& tr = translations[next_math++];
    if (tr.degraded) ++result.degraded_count;
    std::string insert = tr.spoken.text;
    if (translate && !insert.empty()) {
      const char prev = last_visible();
      if ((prev == '\0' || sentence_final(prev)) &&
          insert[0] >= 'a' && insert[0] <= 'z') {
        insert[0] = static_cast<char>(insert[0] - 'a' + 'A');
      }
    }
    if (!insert.empty() && !final_text.empty()) {
      const char prev = final_text.back();
      static constexpr std::string_view kNoSpaceBefore = "([{\"'";
      if (!is_blank(prev) &&
          kNoSpaceBefore.find(prev) == std::string_view::npos) {
        insert.insert(insert.begin(), ' ');
      }
    }
    chunks.push_back({true, std::move(insert)});
    final_text += chunks.back().text;
    result.segment_results.emplace_back(i, std::move(tr));
  }
  result.timing.stages.emplace_back(kStageTranslate, seconds_since(stage_start));

  result.final_text = std::move(final_text);
  result.chunks = std::move(chunks);

  if (!config_.tts_command.empty()) {
    stage_start = Clock::now();
    std::string command = config_.tts_command;
    const std::string wav = config_.tts_output_path.empty()
                                ? "tts_output.wav"
                                : config_.tts_output_path;
    std::string input_file;
    std::string stdin_data;
    if (command.find("{input}") != std::string::npos) {
      input_file = unique_temp_path(".txt");
      write_text_file(input_file, result.final_text);
      replace_all(command, "{input}", shell_quote(input_file));
    } else {
      stdin_data = result.final_text;
    }
    replace_all(command, "{output}", shell_quote(wav));
    const CommandResult run = run_command(command, stdin_data, kHookTimeout);
    if (!input_file.empty()) std::remove(input_file.c_str());
    result.timing.stages.emplace_back(kStageTts, seconds_since(stage_start));
    if (!run.ok()) {
      throw PipelineError(kStageTts, "TTS hook failed: " + describe_failure(run));
    }
    result.tts_output_path = wav;
  }

  result.timing.total = seconds_since(run_start);
  return result;
}

PipelineResult run_document_file(const std::string& path,
                                 const PipelineConfig& config, bool translate) {
  if (::access(path.c_str(), R_OK) != 0) {
    throw PipelineError("input", "cannot read input file: " + path);
  }

  double ocr_seconds = -1.0;
  std::string document;
  if (!config.ocr_command.empty()) {
    const auto ocr_start = Clock::now();
    std::string command = config.ocr_command;
    replace_all(command, "{input}", shell_quote(path));
    std::string out_file;
    if (command.find("{output}") != std::string::npos) {
      out_file = unique_temp_path(".mmd");
      replace_all(command, "{output}", shell_quote(out_file));
    }
    const CommandResult run = run_command(command, "", kHookTimeout);
    if (!run.ok()) {
      if (!out_file.empty()) std::remove(out_file.c_str());
      throw PipelineError(kStageOcr, "OCR hook failed: " + describe_failure(run));
    }
    if (!out_file.empty()) {
      document = read_text_file(out_file);
      std::remove(out_file.c_str());
    } else {
      document = run.out;
    }
    ocr_seconds = seconds_since(ocr_start);
  } else {
    try {
      document = read_text_file(path);
    } catch (const std::runtime_error& e) {
      throw PipelineError("input", e.what());
    }
  }

  if (!is_valid_utf8(document)) {
    throw PipelineError("input", "input is not valid UTF-8: " + path);
  }

  Pipeline pipeline(config);
  PipelineResult result = translate ? pipeline.run(document)
                                    : pipeline.run_without_translator(document);
  if (ocr_seconds >= 0.0) {
    result.timing.stages.insert(result.timing.stages.begin(),
                                {kStageOcr, ocr_seconds});
    result.timing.total += ocr_seconds;
  }
  return result;
}

namespace {

void xml_escape_into(std::string_view text, std::string& out) {
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
}

}  // namespace

std::string emit_ssml(const PipelineResult& result) {
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>"
      "<speak version=\"1.1\" xmlns=\"http://www.w3.org/2001/10/synthesis\" "
      "xml:lang=\"en-US\">";
  for (const PipelineChunk& chunk : result.chunks) {
    if (chunk.text.empty()) continue;
    if (chunk.is_math) {
      out += "<s>";
      xml_escape_into(chunk.text, out);
      out += "</s>";
    } else {
      xml_escape_into(chunk.text, out);
    }
  }
  out += "</speak>";
  return out;
}

}  // namespace mathreader
