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

#include "mathreader/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

#include "json.hpp"
#include "mathreader/text_util.hpp"

namespace mathreader {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_ascii_punct(char c) {
  const unsigned char u = static_cast<unsigned char>(c);
  return (u >= '!' && u <= '/') || (u >= ':' && u <= '@') ||
         (u >= '[' && u <= '`') || (u >= '{' && u <= '~');
}

// Homophone words must survive every normalization step unchanged, or
// substituting them would break normalize's idempotence.
bool is_plain_word(const std::string& w) {
  if (w.empty()) return false;
  for (const char c : w) {
    if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) return false;
  }
  return true;
}

// Rewrites every key to its final target so one substitution pass reaches a
// fixpoint. Chains follow to their terminal word; cycles collapse onto their
// lexicographically smallest member.
void canonicalize(std::unordered_map<std::string, std::string>& map) {
  std::unordered_map<std::string, std::string> resolved;
  resolved.reserve(map.size());
  for (const auto& [key, unused] : map) {
    std::vector<std::string> path;
    std::string cur = key;
    std::string target;
    for (;;) {
      const auto it = map.find(cur);
      if (it == map.end()) {
        target = cur;
        break;
      }
      const auto seen = std::find(path.begin(), path.end(), cur);
      if (seen != path.end()) {
        target = *std::min_element(seen, path.end());
        break;
      }
      path.push_back(cur);
      cur = it->second;
    }
    resolved[key] = target;
  }
  map = std::move(resolved);
}

template <typename T>
AlignmentCounts align_impl(const std::vector<T>& ref,
                           const std::vector<T>& hyp) {
  const std::size_t n = ref.size();
  const std::size_t m = hyp.size();
  std::vector<uint32_t> cost((n + 1) * (m + 1));
  auto at = [&](std::size_t i, std::size_t j) -> uint32_t& {
    return cost[i * (m + 1) + j];
  };
  for (std::size_t i = 0; i <= n; ++i) at(i, 0) = static_cast<uint32_t>(i);
  for (std::size_t j = 0; j <= m; ++j) at(0, j) = static_cast<uint32_t>(j);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      const uint32_t sub = at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      const uint32_t del = at(i - 1, j) + 1;
      const uint32_t ins = at(i, j - 1) + 1;
      at(i, j) = std::min(sub, std::min(del, ins));
    }
  }

  AlignmentCounts counts;
  std::size_t i = n;
  std::size_t j = m;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0 &&
        at(i, j) == at(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1)) {
      if (!(ref[i - 1] == hyp[j - 1])) ++counts.substitutions;
      --i;
      --j;
    } else if (i > 0 && at(i, j) == at(i - 1, j) + 1) {
      ++counts.deletions;
      --i;
    } else {
      ++counts.insertions;
      --j;
    }
  }
  return counts;
}

nlohmann::json counts_json(const AlignmentCounts& c, std::size_t ref_len) {
  return {{"substitutions", c.substitutions},
          {"deletions", c.deletions},
          {"insertions", c.insertions},
          {"reference_length", ref_len}};
}

void score_document(EvalReport& report, DocumentScore&& doc) {
  if (doc.words.valid && doc.chars.valid) {
    report.word_counts.substitutions += doc.words.counts.substitutions;
    report.word_counts.deletions += doc.words.counts.deletions;
    report.word_counts.insertions += doc.words.counts.insertions;
    report.reference_words += doc.words.reference_length;
    report.char_counts.substitutions += doc.chars.counts.substitutions;
    report.char_counts.deletions += doc.chars.counts.deletions;
    report.char_counts.insertions += doc.chars.counts.insertions;
    report.reference_chars += doc.chars.reference_length;
    ++report.scored_documents;
  } else {
    const std::string& why =
        doc.words.valid ? doc.chars.error : doc.words.error;
    report.warnings.push_back("document " + doc.id + " skipped: " + why);
  }
  report.documents.push_back(std::move(doc));
}

void finalize(EvalReport& report) {
  if (report.reference_words > 0) {
    report.wer = static_cast<double>(report.word_counts.distance()) /
                 static_cast<double>(report.reference_words);
  }
  if (report.reference_chars > 0) {
    report.cer = static_cast<double>(report.char_counts.distance()) /
                 static_cast<double>(report.reference_chars);
  }
}

}  // namespace

NormalizationConfig NormalizationConfig::defaults() {
  NormalizationConfig cfg;
  cfg.add_homophone("why", "y");
  cfg.add_homophone("tee", "t");
  return cfg;
}

NormalizationConfig NormalizationConfig::none() {
  NormalizationConfig cfg;
  cfg.lowercase = false;
  cfg.strip_punctuation = false;
  cfg.collapse_whitespace = false;
  return cfg;
}

void NormalizationConfig::add_homophone(const std::string& from,
                                        const std::string& to) {
  if (!is_plain_word(from) || !is_plain_word(to)) {
    throw std::runtime_error(
        "homophones: entries must be single lowercase words: `" + from + " " +
        to + "`");
  }
  homophones[from] = to;
  canonicalize(homophones);
}

void NormalizationConfig::load_homophones(const std::string& path) {
  const std::string text = read_text_file(path);
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    ++lineno;
    std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const std::vector<std::string> words = split_words(line);
    if (words.empty()) continue;
    if (words.size() != 2) {
      throw std::runtime_error("homophones: " + path + ":" +
                               std::to_string(lineno) + ": expected `from to`");
    }
    add_homophone(words[0], words[1]);
  }
}

std::string normalize(std::string_view text, const NormalizationConfig& cfg) {
  std::string s(text);
  if (cfg.lowercase) s = ascii_lowercase(s);
  if (cfg.strip_punctuation) {
    std::string kept;
    kept.reserve(s.size());
    for (const char c : s) {
      if (!is_ascii_punct(c)) kept += c;
    }
    s = std::move(kept);
  }
  if (cfg.collapse_whitespace) s = join_words(split_words(s));
  if (!cfg.homophones.empty()) {
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
      if (is_space(s[i])) {
        out += s[i++];
        continue;
      }
      std::size_t j = i;
      while (j < s.size() && !is_space(s[j])) ++j;
      const std::string word = s.substr(i, j - i);
      const auto it = cfg.homophones.find(word);
      out += it != cfg.homophones.end() ? it->second : word;
      i = j;
    }
    s = std::move(out);
  }
  return s;
}

AlignmentCounts align_sequences(const std::vector<std::string>& reference,
                                const std::vector<std::string>& hypothesis) {
  return align_impl(reference, hypothesis);
}

AlignmentCounts align_sequences(const std::vector<uint32_t>& reference,
                                const std::vector<uint32_t>& hypothesis) {
  return align_impl(reference, hypothesis);
}

RateReport wer(std::string_view reference, std::string_view hypothesis,
               const NormalizationConfig& cfg) {
  RateReport report;
  const std::vector<std::string> ref = split_words(normalize(reference, cfg));
  const std::vector<std::string> hyp = split_words(normalize(hypothesis, cfg));
  if (ref.empty()) {
    report.error = "reference is empty after normalization";
    return report;
  }
  report.valid = true;
  report.counts = align_sequences(ref, hyp);
  report.reference_length = ref.size();
  report.rate = static_cast<double>(report.counts.distance()) /
                static_cast<double>(report.reference_length);
  return report;
}

RateReport cer(std::string_view reference, std::string_view hypothesis,
               const NormalizationConfig& cfg) {
  RateReport report;
  const std::vector<uint32_t> ref = to_code_points(normalize(reference, cfg));
  const std::vector<uint32_t> hyp = to_code_points(normalize(hypothesis, cfg));
  if (ref.empty()) {
    report.error = "reference is empty after normalization";
    return report;
  }
  report.valid = true;
  report.counts = align_sequences(ref, hyp);
  report.reference_length = ref.size();
  report.rate = static_cast<double>(report.counts.distance()) /
                static_cast<double>(report.reference_length);
  return report;
}

EvalReport eval_texts(
    const std::vector<std::pair<std::string, std::string>>& ref_hyp,
    const NormalizationConfig& cfg) {
  EvalReport report;
  std::size_t index = 0;
  for (const auto& [ref, hyp] : ref_hyp) {
    DocumentScore doc;
    doc.id = std::to_string(++index);
    doc.words = wer(ref, hyp, cfg);
    doc.chars = cer(ref, hyp, cfg);
    score_document(report, std::move(doc));
  }
  finalize(report);
  return report;
}

EvalReport eval_corpus(const std::vector<CorpusPair>& pairs,
                       const NormalizationConfig& cfg) {
  EvalReport report;
  for (const CorpusPair& pair : pairs) {
    const std::string ref = read_text_file(pair.ref_path);
    const std::string hyp = read_text_file(pair.hyp_path);
    DocumentScore doc;
    doc.id = pair.id;
    doc.words = wer(ref, hyp, cfg);
    doc.chars = cer(ref, hyp, cfg);
    score_document(report, std::move(doc));
  }
  finalize(report);
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::json j;
  j["wer"] = wer;
  j["cer"] = cer;
  j["counts"] = {{"words", counts_json(word_counts, reference_words)},
                 {"chars", counts_json(char_counts, reference_chars)}};
  j["scored_documents"] = scored_documents;
  nlohmann::json docs = nlohmann::json::array();
  for (const DocumentScore& doc : documents) {
    nlohmann::json d;
    d["id"] = doc.id;
    d["valid"] = doc.words.valid && doc.chars.valid;
    if (doc.words.valid) {
      d["wer"] = doc.words.rate;
      d["words"] = counts_json(doc.words.counts, doc.words.reference_length);
    }
    if (doc.chars.valid) {
      d["cer"] = doc.chars.rate;
      d["chars"] = counts_json(doc.chars.counts, doc.chars.reference_length);
    }
    docs.push_back(std::move(d));
  }
  j["documents"] = std::move(docs);
  j["warnings"] = warnings;
  return j.dump(2);
}

std::string EvalReport::to_table() const {
  std::size_t width = 8;  // "Document"
  for (const DocumentScore& doc : documents)
    width = std::max(width, doc.id.size());
  width = std::max(width, std::size_t(6));  // "corpus"

  char buf[64];
  std::string out;
  auto cell = [&](const RateReport& r) {
    if (!r.valid) return std::string("      --");
    std::snprintf(buf, sizeof buf, "%8.4f", r.rate);
    return std::string(buf);
  };
  auto row = [&](const std::string& id, const std::string& w,
                 const std::string& c) {
    out += id;
    out.append(width - id.size() + 2, ' ');
    out += w;
    out += "  ";
    out += c;
    out += '\n';
  };
  row("Document", "     WER", "     CER");
  for (const DocumentScore& doc : documents)
    row(doc.id, cell(doc.words), cell(doc.chars));
  RateReport pooled_w;
  pooled_w.valid = reference_words > 0;
  pooled_w.rate = wer;
  RateReport pooled_c;
  pooled_c.valid = reference_chars > 0;
  pooled_c.rate = cer;
  row("corpus", cell(pooled_w), cell(pooled_c));
  return out;
}

std::vector<CorpusPair> load_manifest(const std::string& path) {
  const std::string text = read_text_file(path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("manifest " + path + ": " + e.what());
  }
  if (!j.is_array()) {
    throw std::runtime_error("manifest " + path + ": expected a JSON list");
  }
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto resolve = [&](const std::string& p) {
    const std::filesystem::path fp(p);
    if (fp.is_absolute()) return fp.string();
    return (base / fp).lexically_normal().string();
  };

  std::vector<CorpusPair> pairs;
  pairs.reserve(j.size());
  for (const auto& entry : j) {
    if (!entry.is_object() || !entry.contains("ref") ||
        !entry.contains("hyp") || !entry["ref"].is_string() ||
        !entry["hyp"].is_string()) {
      throw std::runtime_error(
          "manifest " + path +
          ": each entry needs string fields `ref` and `hyp`");
    }
    CorpusPair pair;
    pair.ref_path = resolve(entry["ref"].get<std::string>());
    pair.hyp_path = resolve(entry["hyp"].get<std::string>());
    if (entry.contains("id")) {
      if (!entry["id"].is_string()) {
        throw std::runtime_error("manifest " + path + ": `id` must be a string");
      }
      pair.id = entry["id"].get<std::string>();
    } else {
      pair.id = std::filesystem::path(entry["ref"].get<std::string>())
                    .stem()
                    .string();
    }
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

}  // namespace mathreader
