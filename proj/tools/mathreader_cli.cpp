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

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mathreader/eval.hpp"
#include "mathreader/math_parser.hpp"
#include "mathreader/pipeline.hpp"
#include "mathreader/segmenter.hpp"
#include "mathreader/text_util.hpp"
#include "mathreader/translator.hpp"
#include "mathreader/verbalizer.hpp"

namespace {

using namespace mathreader;

// Exit codes: 2 missing file or manifest, 3 failed hook, 64 bad flags,
// 65 invalid UTF-8 input.
constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNoInput = 2;
constexpr int kExitHookFailed = 3;
constexpr int kExitUsage = 64;
constexpr int kExitBadEncoding = 65;

struct PipelineFlags {
  std::string input;
  std::string translator = "rules";
  std::string tts_cmd;
  std::string ocr_cmd;
  bool no_translator = false;
  bool voice_fences = false;
  bool verbose_grouping = false;
  int jobs = 1;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
  cmd->add_option("input", f.input, "Input document (markdown/mmd)")
      ->required();
  cmd->add_option("--translator", f.translator,
                  "Formula translator: `rules` or `cmd:\"...\"` for an "
                  "external command");
  cmd->add_flag("--no-translator", f.no_translator,
                "Pass formulas through raw (ablation arm)");
  cmd->add_option("--tts-cmd", f.tts_cmd,
                  "TTS hook command; {input} = text file, {output} = wav");
  cmd->add_option("--ocr-cmd", f.ocr_cmd,
                  "OCR hook command; {input} = source, {output} = mmd");
  cmd->add_flag("--voice-fences", f.voice_fences,
                "Speak parentheses around grouped terms");
  cmd->add_flag("--verbose-grouping", f.verbose_grouping,
                "Mark grouped terms with quantity words");
  cmd->add_option("--jobs", f.jobs, "Translator threads")
      ->check(CLI::PositiveNumber);
}

VerbalizationRules load_rules() {
  VerbalizationRules rules = VerbalizationRules::defaults();
  const char* env = std::getenv("MATHREADER_RULES");
  if (env != nullptr && *env != '\0') rules.load_overrides(env);
  return rules;
}

TranslatorBackend parse_backend(const std::string& spec) {
  if (spec == "rules") return TranslatorBackend::rule_based();
  if (spec.rfind("cmd:", 0) == 0 && spec.size() > 4) {
    return TranslatorBackend::external(spec.substr(4));
  }
  throw CLI::ValidationError(
      "--translator", "expected `rules` or `cmd:\"...\"`, got `" + spec + "`");
}

PipelineConfig make_config(const PipelineFlags& f) {
  PipelineConfig config;
  config.backend = parse_backend(f.translator);
  config.rules = load_rules();
  config.voice_fences = f.voice_fences;
  config.verbose_grouping = f.verbose_grouping;
  config.tts_command = f.tts_cmd;
  config.ocr_command = f.ocr_cmd;
  config.parallelism = f.jobs;
  return config;
}

void emit_payload(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    if (!payload.empty() && payload.back() != '\n') std::cout << '\n';
  } else {
    write_text_file(out_path, payload);
  }
}

int exit_code_for(const PipelineError& e) {
  if (e.stage() == "input") {
    return std::string_view(e.what()).find("UTF-8") != std::string_view::npos
               ? kExitBadEncoding
               : kExitNoInput;
  }
  return kExitHookFailed;
}

int cmd_speak(const PipelineFlags& flags, const std::string& out_path,
              const std::string& format, const std::string& tts_out) {
  PipelineConfig config = make_config(flags);
  config.format = format == "ssml" ? OutputFormat::Ssml : OutputFormat::PlainText;
  config.tts_output_path = tts_out;
  const PipelineResult result =
      run_document_file(flags.input, config, !flags.no_translator);
  if (result.degraded_count > 0) {
    std::cerr << "mathreader: " << result.degraded_count << " of "
              << result.segment_results.size()
              << " formulas fell back to the rule-based translator\n";
  }
  emit_payload(config.format == OutputFormat::Ssml ? emit_ssml(result)
                                                   : result.final_text,
               out_path);
  return kExitOk;
}

int cmd_segment(const std::string& input) {
  std::string document;
  try {
    document = read_text_file(input);
  } catch (const std::runtime_error& e) {
    std::cerr << "mathreader: " << e.what() << "\n";
    return kExitNoInput;
  }
  if (!is_valid_utf8(document)) {
    std::cerr << "mathreader: input is not valid UTF-8: " << input << "\n";
    return kExitBadEncoding;
  }
  std::cout << segments_to_json(segment(document)) << "\n";
  return kExitOk;
}

int cmd_verbalize(const std::string& formula_arg, bool from_stdin,
                  bool voice_fences, bool verbose_grouping, bool dump_ast) {
  std::string formula = formula_arg;
  if (from_stdin) {
    formula.assign(std::istreambuf_iterator<char>(std::cin),
                   std::istreambuf_iterator<char>());
  }
  if (!is_valid_utf8(formula)) {
    std::cerr << "mathreader: formula is not valid UTF-8\n";
    return kExitBadEncoding;
  }
  if (dump_ast) {
    std::cout << ast_to_json(parse_latex(formula)) << "\n";
    return kExitOk;
  }
  VerbalizationRules rules = load_rules();
  rules.voice_fences = voice_fences;
  rules.verbose_grouping = verbose_grouping;
  std::cout << verbalize_latex(formula, rules).text << "\n";
  return kExitOk;
}

// Plain-text path list, one per line, # comments.
std::vector<std::string> read_path_list(const std::string& path) {
  const std::string text = read_text_file(path);
  std::vector<std::string> paths;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::vector<std::string> words = split_words(line);
    if (words.empty()) continue;
    paths.push_back(words.size() == 1 ? words[0] : line);
  }
  return paths;
}

int cmd_eval(const std::string& manifest, const std::string& refs_path,
             const std::string& hyps_path, const std::string& json_path,
             const std::string& homophones_path, bool raw) {
  std::vector<CorpusPair> pairs;
  try {
    if (!manifest.empty()) {
      pairs = load_manifest(manifest);
    } else {
      const std::vector<std::string> refs = read_path_list(refs_path);
      const std::vector<std::string> hyps = read_path_list(hyps_path);
      if (refs.size() != hyps.size()) {
        std::cerr << "mathreader: --refs lists " << refs.size()
                  << " files but --hyps lists " << hyps.size() << "\n";
        return kExitNoInput;
      }
      for (std::size_t i = 0; i < refs.size(); ++i) {
        pairs.push_back({std::filesystem::path(refs[i]).stem().string(),
                         refs[i], hyps[i]});
      }
    }

    NormalizationConfig cfg =
        raw ? NormalizationConfig::none() : NormalizationConfig::defaults();
    if (!homophones_path.empty()) cfg.load_homophones(homophones_path);

    const EvalReport report = eval_corpus(pairs, cfg);
    for (const std::string& warning : report.warnings) {
      std::cerr << "mathreader: " << warning << "\n";
    }
    std::cout << report.to_table();
    if (!json_path.empty()) write_text_file(json_path, report.to_json());
  } catch (const std::runtime_error& e) {
    std::cerr << "mathreader: " << e.what() << "\n";
    return kExitNoInput;
  }
  return kExitOk;
}

int cmd_bench(const PipelineFlags& flags, int repeats,
              const std::string& json_path) {
  const PipelineConfig config = make_config(flags);
  StageTiming mean;
  for (int r = 0; r < repeats; ++r) {
    const PipelineResult result =
        run_document_file(flags.input, config, !flags.no_translator);
    const StageTiming& t = result.timing;
    if (r == 0) {
      mean = t;
    } else {
      for (std::size_t i = 0; i < mean.stages.size(); ++i) {
        mean.stages[i].second += t.stages[i].second;
      }
      mean.total += t.total;
    }
  }
  for (auto& [name, secs] : mean.stages) secs /= repeats;
  mean.total /= repeats;
  std::cout << mean.to_table();
  if (!json_path.empty()) write_text_file(json_path, mean.to_json());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reads markup documents with LaTeX math aloud: converts them "
               "to TTS-ready spoken English"};
  app.require_subcommand(1);

  PipelineFlags speak_flags;
  std::string speak_out;
  std::string speak_format = "text";
  std::string speak_tts_out;
  CLI::App* speak = app.add_subcommand(
      "speak", "Convert a document to TTS-ready text (or SSML)");
  add_pipeline_flags(speak, speak_flags);
  speak->add_option("--out", speak_out, "Output file (default stdout)");
  speak
      ->add_option("--format", speak_format, "Output format")
      ->check(CLI::IsMember({"text", "ssml"}));
  speak->add_option("--tts-out", speak_tts_out,
                    "Wav path for the TTS hook (default tts_output.wav)");

  std::string segment_input;
  CLI::App* seg = app.add_subcommand(
      "segment", "Split a document into prose and math segments (JSON)");
  seg->add_option("input", segment_input, "Input document")->required();

  std::string verbalize_formula;
  bool verbalize_stdin = false;
  bool verbalize_fences = false;
  bool verbalize_grouping = false;
  bool verbalize_dump_ast = false;
  CLI::App* verb = app.add_subcommand(
      "verbalize", "Convert one LaTeX formula to spoken English");
  verb->add_option("formula", verbalize_formula, "LaTeX formula");
  verb->add_flag("--stdin", verbalize_stdin, "Read the formula from stdin");
  verb->add_flag("--voice-fences", verbalize_fences,
                 "Speak parentheses around grouped terms");
  verb->add_flag("--verbose-grouping", verbalize_grouping,
                 "Mark grouped terms with quantity words");
  verb->add_flag("--dump-ast", verbalize_dump_ast,
                 "Print the parsed formula as JSON instead of speech");

  std::string eval_manifest;
  std::string eval_refs;
  std::string eval_hyps;
  std::string eval_json;
  std::string eval_homophones;
  bool eval_raw = false;
  CLI::App* ev = app.add_subcommand(
      "eval", "Score hypothesis transcripts against ground truth (WER/CER)");
  ev->add_option("manifest", eval_manifest,
                 "Paired manifest: JSON list of {ref, hyp, id}");
  ev->add_option("--refs", eval_refs, "Text file listing reference paths");
  ev->add_option("--hyps", eval_hyps, "Text file listing hypothesis paths");
  ev->add_option("--json", eval_json, "Also write the report as JSON here");
  ev->add_option("--homophones", eval_homophones,
                 "Extra homophone pairs, one `from to` per line");
  ev->add_flag("--raw", eval_raw, "Score without any text normalization");

  PipelineFlags bench_flags;
  int bench_repeats = 3;
  std::string bench_json;
  CLI::App* bench = app.add_subcommand(
      "bench", "Time the pipeline stages over repeated runs");
  add_pipeline_flags(bench, bench_flags);
  bench->add_option("--repeats", bench_repeats, "Number of runs to average")
      ->check(CLI::PositiveNumber);
  bench->add_option("--json", bench_json, "Also write mean timings as JSON");

  try {
    app.parse(argc, argv);

    if (speak->parsed()) {
      return cmd_speak(speak_flags, speak_out, speak_format, speak_tts_out);
    }
    if (seg->parsed()) return cmd_segment(segment_input);
    if (verb->parsed()) {
      if (verbalize_stdin == !verbalize_formula.empty()) {
        std::cerr << "mathreader: pass a formula argument or --stdin, "
                     "not both\n";
        return kExitUsage;
      }
      return cmd_verbalize(verbalize_formula, verbalize_stdin,
                           verbalize_fences, verbalize_grouping,
                           verbalize_dump_ast);
    }
    if (ev->parsed()) {
      const bool paired = !eval_manifest.empty();
      const bool listed = !eval_refs.empty() && !eval_hyps.empty();
      if (paired == listed) {
        std::cerr << "mathreader: pass a paired manifest or both --refs "
                     "and --hyps\n";
        return kExitUsage;
      }
      return cmd_eval(eval_manifest, eval_refs, eval_hyps, eval_json,
                      eval_homophones, eval_raw);
    }
    if (bench->parsed()) {
      return cmd_bench(bench_flags, bench_repeats, bench_json);
    }
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const PipelineError& e) {
    std::cerr << "mathreader: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "mathreader: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "mathreader: " << e.what() << "\n";
    return kExitError;
  }
}
