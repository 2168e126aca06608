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

#include "mathreader/translator.hpp"

#include <stdexcept>
#include <utility>

#include "mathreader/subprocess.hpp"

namespace mathreader {

namespace {

constexpr std::string_view kPlaceholder = "{formula}";

std::size_t count_placeholders(std::string_view command) {
  std::size_t count = 0;
  std::size_t at = 0;
  while ((at = command.find(kPlaceholder, at)) != std::string_view::npos) {
    ++count;
    at += kPlaceholder.size();
  }
  return count;
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

std::string first_line_trimmed(std::string_view s) {
  const std::size_t nl = s.find('\n');
  std::string_view line = nl == std::string_view::npos ? s : s.substr(0, nl);
  auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v';
  };
  while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
  while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
  return std::string(line);
}

}  // namespace

TranslatorBackend TranslatorBackend::rule_based() { return {}; }

TranslatorBackend TranslatorBackend::external(std::string command,
                                              std::chrono::milliseconds timeout) {
  TranslatorBackend b;
  b.kind = BackendKind::ExternalCommand;
  b.command = std::move(command);
  b.timeout = timeout;
  return b;
}

Translator::Translator(TranslatorBackend backend, VerbalizationRules rules)
    : backend_(std::move(backend)), rules_(std::move(rules)) {
  if (backend_.kind == BackendKind::ExternalCommand &&
      count_placeholders(backend_.command) > 1) {
    throw std::invalid_argument(
        "translator: external command names {formula} more than once");
  }
}

TranslationResult Translator::translate(const std::string& formula) const {
  if (backend_.kind == BackendKind::RuleBased) {
    return {verbalize_latex(formula, rules_), BackendKind::RuleBased, false};
  }

  std::string command = backend_.command;
  std::string stdin_data;
  const std::size_t at = command.find(kPlaceholder);
  if (at != std::string::npos) {
    command.replace(at, kPlaceholder.size(), shell_quote(formula));
  } else {
    stdin_data = formula + "\n";
  }

  const CommandResult run = run_command(command, stdin_data, backend_.timeout);
  if (run.ok()) {
    std::string line = first_line_trimmed(run.out);
    if (!line.empty()) {
      SpokenText spoken;
      spoken.text = std::move(line);
      return {std::move(spoken), BackendKind::ExternalCommand, false};
    }
  }
  return {verbalize_latex(formula, rules_), BackendKind::RuleBased, true};
}

}  // namespace mathreader
