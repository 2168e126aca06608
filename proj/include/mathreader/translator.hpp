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

#ifndef MATHREADER_TRANSLATOR_HPP
#define MATHREADER_TRANSLATOR_HPP

#include <chrono>
#include <string>

#include "mathreader/verbalizer.hpp"

namespace mathreader {

enum class BackendKind { RuleBased, ExternalCommand };

// Formula-translation backend selector. ExternalCommand runs a shell command
// per formula: the formula arrives on the command's stdin (plus newline)
// unless the template names it once via a {formula} placeholder, and one line
// of spoken English is read back from stdout. Exit code 0 means success.
struct TranslatorBackend {
  BackendKind kind = BackendKind::RuleBased;
  std::string command;
  std::chrono::milliseconds timeout{30000};

  static TranslatorBackend rule_based();
  static TranslatorBackend external(
      std::string command,
      std::chrono::milliseconds timeout = std::chrono::milliseconds(30000));
};

struct TranslationResult {
  SpokenText spoken;
  BackendKind backend_used = BackendKind::RuleBased;
  bool degraded = false;  // external backend failed, rule-based fallback ran
};

// Uniform front over the rule-based verbalizer and an external command.
// A formula is never dropped: any external failure (nonzero exit, timeout,
// empty output) falls back to the rule-based rendering with degraded=true.
class Translator {
 public:
  // Throws std::invalid_argument if an external template contains more than
  // one {formula} placeholder.
  Translator(TranslatorBackend backend, VerbalizationRules rules);

  TranslationResult translate(const std::string& formula) const;

  const TranslatorBackend& backend() const { return backend_; }
  const VerbalizationRules& rules() const { return rules_; }

 private:
  TranslatorBackend backend_;
  VerbalizationRules rules_;
};

}  // namespace mathreader

#endif  // MATHREADER_TRANSLATOR_HPP
