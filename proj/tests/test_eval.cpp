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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mathreader/eval.hpp"
#include "mathreader/text_util.hpp"
#include "support/helpers.hpp"

using namespace mathreader;

namespace {

class TempDir {
 public:
  TempDir() {
    dir_ = std::filesystem::temp_directory_path() /
           ("mathreader_eval_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter_++));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  std::string file(const std::string& name, const std::string& body) const {
    std::filesystem::path p = dir_ / name;
    std::ofstream out(p, std::ios::binary);
    out << body;
    return p.string();
  }
  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }

 private:
  static inline int counter_ = 0;
  std::filesystem::path dir_;
};

std::vector<std::string> random_word_seq(std::mt19937& rng, int max_len) {
  static const char* kWords[] = {"sum", "over", "x", "equals"};
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> pick(0, 3);
  std::vector<std::string> seq(len(rng));
  for (std::string& w : seq) w = kWords[pick(rng)];
  return seq;
}

std::string random_char_string(std::mt19937& rng, int max_len) {
  static const char kAlpha[] = "abcd ";
  std::uniform_int_distribution<int> len(0, max_len);
  std::uniform_int_distribution<int> pick(0, 4);
  std::string s(len(rng), ' ');
  for (char& c : s) c = kAlpha[pick(rng)];
  return s;
}

}  // namespace

TEST_CASE("normalization examples") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();
  CHECK(normalize("Why equals X.", cfg) == "y equals x");
  CHECK(normalize("", cfg).empty());
  CHECK(normalize("a  b\tc", cfg) == "a b c");
  CHECK(normalize("Hello, World!", cfg) == "hello world");
  CHECK(normalize("  leading and trailing  ", cfg) == "leading and trailing");
  CHECK(normalize("Tee time", cfg) == "t time");
}

TEST_CASE("homophones replace whole words only") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();
  CHECK(normalize("why", cfg) == "y");
  // "why" inside a longer word stays put
  CHECK(normalize("whyever", cfg) == "whyever");
}

TEST_CASE("normalization is idempotent") {
  std::vector<NormalizationConfig> configs;
  configs.push_back(NormalizationConfig::defaults());
  configs.push_back(NormalizationConfig::none());
  NormalizationConfig chained = NormalizationConfig::defaults();
  chained.add_homophone("bee", "b");
  chained.add_homophone("b", "bee2");
  configs.push_back(chained);

  std::mt19937 rng(20240821);
  for (const NormalizationConfig& cfg : configs) {
    for (const char* text :
         {"Why equals X.", "a  b\tc", "", "MiXeD CaSe, punct!", "bee b why",
          "tee tee tee"}) {
      const std::string once = normalize(text, cfg);
      CHECK(normalize(once, cfg) == once);
    }
    for (int i = 0; i < 200; ++i) {
      const std::string text = mathreader::test::random_document(rng, 80);
      const std::string once = normalize(text, cfg);
      CAPTURE(text);
      CHECK(normalize(once, cfg) == once);
    }
  }
}

TEST_CASE("none config leaves text alone") {
  const NormalizationConfig cfg = NormalizationConfig::none();
  CHECK(normalize("Why equals X.", cfg) == "Why equals X.");
  CHECK(normalize("a  b", cfg) == "a  b");
}

TEST_CASE("homophone chains collapse to one canonical form") {
  NormalizationConfig cfg = NormalizationConfig::none();
  cfg.homophones.clear();
  cfg.add_homophone("a1", "b1");
  cfg.add_homophone("b1", "c1");
  // both hops land on the chain's end in one pass
  CHECK(normalize("a1 b1 c1", cfg) == "c1 c1 c1");
  CHECK(normalize(normalize("a1", cfg), cfg) == normalize("a1", cfg));
}

TEST_CASE("homophone cycles settle deterministically") {
  NormalizationConfig cfg = NormalizationConfig::none();
  cfg.add_homophone("pp", "qq");
  cfg.add_homophone("qq", "pp");
  const std::string out = normalize("pp qq", cfg);
  // the lexicographically smallest cycle member wins
  CHECK(out == "pp pp");
  CHECK(normalize(out, cfg) == out);
}

TEST_CASE("malformed homophone words are rejected") {
  NormalizationConfig cfg = NormalizationConfig::defaults();
  CHECK_THROWS_AS(cfg.add_homophone("Upper", "y"), std::runtime_error);
  CHECK_THROWS_AS(cfg.add_homophone("two words", "y"), std::runtime_error);
  CHECK_THROWS_AS(cfg.add_homophone("", "y"), std::runtime_error);
  CHECK_THROWS_AS(cfg.add_homophone("ok", "punct!"), std::runtime_error);
}

TEST_CASE("homophone file loading") {
  TempDir tmp;
  const std::string good = tmp.file("hom.txt",
                                    "# comment\n"
                                    "bee b\n"
                                    "\n"
                                    "see c\n");
  NormalizationConfig cfg = NormalizationConfig::defaults();
  cfg.load_homophones(good);
  CHECK(normalize("bee see why", cfg) == "b c y");

  NormalizationConfig bad = NormalizationConfig::defaults();
  CHECK_THROWS_AS(bad.load_homophones("/no/such/homophones.txt"),
                  std::runtime_error);
  const std::string malformed = tmp.file("bad.txt", "only_one_word\n");
  CHECK_THROWS_AS(bad.load_homophones(malformed), std::runtime_error);
}

TEST_CASE("wer golden cases") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();

  RateReport same = wer("a b c", "a b c", cfg);
  CHECK(same.valid);
  CHECK(same.rate == doctest::Approx(0.0));
  CHECK(same.counts.distance() == 0);
  CHECK(same.reference_length == 3);

  RateReport sub = wer("a b c", "a x c", cfg);
  CHECK(sub.valid);
  CHECK(sub.rate == doctest::Approx(1.0 / 3.0));
  CHECK(sub.counts.substitutions == 1);
  CHECK(sub.counts.deletions == 0);
  CHECK(sub.counts.insertions == 0);

  RateReport del = wer("a b c", "a c", cfg);
  CHECK(del.counts.deletions == 1);
  CHECK(del.rate == doctest::Approx(1.0 / 3.0));

  RateReport ins = wer("a c", "a b c", cfg);
  CHECK(ins.counts.insertions == 1);
  CHECK(ins.rate == doctest::Approx(0.5));

  // insertions can push the rate past one
  RateReport over = wer("a", "x y z", cfg);
  CHECK(over.rate > 1.0);
}

TEST_CASE("cer golden cases") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();

  CHECK(cer("ab", "ab", cfg).rate == doctest::Approx(0.0));

  RateReport half = cer("ab", "ac", cfg);
  CHECK(half.valid);
  CHECK(half.rate == doctest::Approx(0.5));
  CHECK(half.counts.substitutions == 1);

  // spaces count as characters
  RateReport spaced = cer("a b", "ab", cfg);
  CHECK(spaced.reference_length == 3);
  CHECK(spaced.counts.distance() == 1);
}

TEST_CASE("normalization feeds the scorer") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();
  // differ only in case, punctuation, and a homophone
  RateReport r = wer("Why equals X.", "why equals x", cfg);
  CHECK(r.valid);
  CHECK(r.rate == doctest::Approx(0.0));

  const NormalizationConfig raw = NormalizationConfig::none();
  CHECK(wer("Why equals X.", "why equals x", raw).rate > 0.0);
}

TEST_CASE("empty normalized reference is a defined error") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();
  RateReport r = wer("...", "anything", cfg);
  CHECK(!r.valid);
  CHECK(!r.error.empty());

  RateReport c = cer("", "anything", cfg);
  CHECK(!c.valid);
}

TEST_CASE("dynamic programming matches a brute-force oracle on words") {
  std::mt19937 rng(20240822);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::string> ref = random_word_seq(rng, 8);
    std::vector<std::string> hyp = random_word_seq(rng, 8);
    AlignmentCounts counts = align_sequences(ref, hyp);
    std::size_t expected = mathreader::test::brute_edit_distance(ref, hyp);
    CAPTURE(join_words(ref));
    CAPTURE(join_words(hyp));
    CHECK(counts.distance() == expected);
  }
}

TEST_CASE("dynamic programming matches a brute-force oracle on characters") {
  std::mt19937 rng(20240823);
  for (int i = 0; i < 1000; ++i) {
    const std::string ref = random_char_string(rng, 10);
    const std::string hyp = random_char_string(rng, 10);
    AlignmentCounts counts =
        align_sequences(to_code_points(ref), to_code_points(hyp));
    std::vector<char> rv(ref.begin(), ref.end());
    std::vector<char> hv(hyp.begin(), hyp.end());
    std::size_t expected = mathreader::test::brute_edit_distance(rv, hv);
    CAPTURE(ref);
    CAPTURE(hyp);
    CHECK(counts.distance() == expected);
  }
}

TEST_CASE("edit distance is symmetric in magnitude") {
  std::mt19937 rng(20240824);
  for (int i = 0; i < 200; ++i) {
    std::vector<std::string> a = random_word_seq(rng, 6);
    std::vector<std::string> b = random_word_seq(rng, 6);
    CHECK(align_sequences(a, b).distance() ==
          align_sequences(b, a).distance());
  }
}

TEST_CASE("corpus pooling sums counts instead of averaging rates") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();
  // doc1: 1 error over 4 words; doc2: 1 over 6. Pooled: 2/10, never
  // the rate mean (1/4 + 1/6)/2.
  EvalReport report = eval_texts(
      {{"one two three four", "one two three wrong"},
       {"a b c d e f", "a b c d e wrong"}},
      cfg);
  CHECK(report.scored_documents == 2);
  CHECK(report.wer == doctest::Approx(0.2));
  CHECK(report.reference_words == 10);
  CHECK(report.word_counts.distance() == 2);
}

TEST_CASE("identical corpus scores zero") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();
  EvalReport report = eval_texts(
      {{"sum over n", "sum over n"}, {"x equals y", "x equals y"}}, cfg);
  CHECK(report.wer == doctest::Approx(0.0));
  CHECK(report.cer == doctest::Approx(0.0));
  CHECK(report.warnings.empty());
}

TEST_CASE("invalid documents are skipped with a warning") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();
  EvalReport report = eval_texts(
      {{"good reference here", "good reference here"}, {"...", "anything"}},
      cfg);
  CHECK(report.scored_documents == 1);
  CHECK(report.wer == doctest::Approx(0.0));
  REQUIRE(report.documents.size() == 2);
  CHECK(report.documents[0].words.valid);
  CHECK(!report.documents[1].words.valid);
  REQUIRE(!report.warnings.empty());
  CHECK(report.warnings.front().find("2") != std::string::npos);
}

TEST_CASE("report serializes to json") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();
  EvalReport report =
      eval_texts({{"a b c d", "a b x d"}}, cfg);
  nlohmann::json parsed = nlohmann::json::parse(report.to_json());
  CHECK(parsed["wer"] == doctest::Approx(0.25));
  CHECK(parsed["counts"]["words"]["substitutions"] == 1);
  CHECK(parsed["counts"]["words"]["reference_length"] == 4);
  CHECK(parsed["scored_documents"] == 1);
  REQUIRE(parsed["documents"].size() == 1);
  CHECK(parsed["documents"][0]["id"] == "1");
  CHECK(parsed["documents"][0]["valid"] == true);
  CHECK(parsed["documents"][0]["wer"] == doctest::Approx(0.25));
}

TEST_CASE("report renders a table with a corpus row") {
  const NormalizationConfig cfg = NormalizationConfig::defaults();
  EvalReport report = eval_texts({{"a b", "a b"}, {"c d", "c x"}}, cfg);
  const std::string table = report.to_table();
  CHECK(table.find("WER") != std::string::npos);
  CHECK(table.find("CER") != std::string::npos);
  CHECK(table.find("corpus") != std::string::npos);
  CHECK(table.find("0.0000") != std::string::npos);
}

TEST_CASE("eval_corpus reads files and keeps ids") {
  TempDir tmp;
  const std::string ref = tmp.file("r.txt", "x equals one\n");
  const std::string hyp = tmp.file("h.txt", "x equals one\n");
  EvalReport report = eval_corpus({{"mydoc", ref, hyp}},
                                  NormalizationConfig::defaults());
  CHECK(report.scored_documents == 1);
  CHECK(report.wer == doctest::Approx(0.0));
  REQUIRE(report.documents.size() == 1);
  CHECK(report.documents[0].id == "mydoc");
}

TEST_CASE("eval_corpus surfaces unreadable files") {
  CHECK_THROWS_AS(eval_corpus({{"x", "/no/such/ref.txt", "/no/such/hyp.txt"}},
                              NormalizationConfig::defaults()),
                  std::runtime_error);
}

TEST_CASE("manifest loading") {
  TempDir tmp;
  tmp.file("ref_a.txt", "alpha");
  tmp.file("hyp_a.txt", "alpha");
  const std::string manifest = tmp.file(
      "manifest.json",
      "[{\"ref\": \"ref_a.txt\", \"hyp\": \"hyp_a.txt\", \"id\": \"a\"},\n"
      " {\"ref\": \"ref_a.txt\", \"hyp\": \"hyp_a.txt\"}]");
  std::vector<CorpusPair> pairs = load_manifest(manifest);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].id == "a");
  // relative paths resolve against the manifest directory
  CHECK(pairs[0].ref_path == tmp.path("ref_a.txt"));
  // a missing id falls back to the reference stem
  CHECK(pairs[1].id == "ref_a");
}

TEST_CASE("manifest errors carry the path") {
  TempDir tmp;
  CHECK_THROWS_AS(load_manifest("/no/such/manifest.json"),
                  std::runtime_error);

  const std::string bad_json = tmp.file("bad.json", "{not json");
  CHECK_THROWS_AS(load_manifest(bad_json), std::runtime_error);

  const std::string not_list = tmp.file("obj.json", "{\"ref\": \"x\"}");
  CHECK_THROWS_AS(load_manifest(not_list), std::runtime_error);

  const std::string no_hyp = tmp.file("nohyp.json", "[{\"ref\": \"x\"}]");
  CHECK_THROWS_AS(load_manifest(no_hyp), std::runtime_error);

  try {
    load_manifest(bad_json);
    FAIL("expected runtime_error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
  }
}

TEST_CASE("bundled demo corpus scores as documented") {
  const std::string demo = mathreader::test::data_dir() + "/eval_demo";
  std::vector<CorpusPair> pairs = load_manifest(demo + "/manifest.json");
  EvalReport plain = eval_corpus(pairs, NormalizationConfig::defaults());
  // "ex" for "x" survives the default map: 1 error pooled over 12 words
  CHECK(plain.wer == doctest::Approx(1.0 / 12.0));
  REQUIRE(plain.documents.size() == 2);
  CHECK(plain.documents[0].words.rate == doctest::Approx(0.2));
  CHECK(plain.documents[1].words.rate == doctest::Approx(0.0));

  NormalizationConfig with_map = NormalizationConfig::defaults();
  with_map.load_homophones(mathreader::test::data_dir() + "/homophones.txt");
  EvalReport mapped = eval_corpus(pairs, with_map);
  CHECK(mapped.wer == doctest::Approx(0.0));
  CHECK(mapped.cer == doctest::Approx(0.0));

  // the homophone map can only help on this corpus
  CHECK(mapped.wer <= plain.wer);
}
