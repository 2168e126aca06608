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
#include <chrono>
#include <string>

#include "doctest.h"
#include "mathreader/subprocess.hpp"

using namespace mathreader;
using namespace std::chrono_literals;

TEST_CASE("echo captures stdout") {
  CommandResult r = run_command("echo hello", "", 10s);
  CHECK(r.ok());
  CHECK(r.exit_code == 0);
  CHECK(r.out == "hello\n");
  CHECK(r.err.empty());
}

TEST_CASE("stderr is captured separately") {
  CommandResult r = run_command("echo out; echo err >&2", "", 10s);
  CHECK(r.ok());
  CHECK(r.out == "out\n");
  CHECK(r.err == "err\n");
}

TEST_CASE("nonzero exit code is reported") {
  CommandResult r = run_command("exit 7", "", 10s);
  CHECK(!r.ok());
  CHECK(r.exit_code == 7);
  CHECK(!r.timed_out);
  CHECK(!r.signaled);
}

TEST_CASE("stdin is fed to the child") {
  CommandResult r = run_command("cat", "formula in\n", 10s);
  CHECK(r.ok());
  CHECK(r.out == "formula in\n");

  // transformation confirms the data really flowed through
  CommandResult rev = run_command("tr a-z A-Z", "abc", 10s);
  CHECK(rev.ok());
  CHECK(rev.out == "ABC");
}

TEST_CASE("large stdin does not deadlock") {
  std::string big(512 * 1024, 'x');
  CommandResult r = run_command("cat", big, 30s);
  CHECK(r.ok());
  CHECK(r.out.size() == big.size());
}

TEST_CASE("timeout kills a hung command") {
  const auto start = std::chrono::steady_clock::now();
  CommandResult r = run_command("sleep 30", "", 300ms);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(!r.ok());
  CHECK(r.timed_out);
  CHECK(elapsed < 10s);
}

TEST_CASE("timeout kills the whole process group") {
  // the child spawns its own sleeping child; both must die with the group
  const auto start = std::chrono::steady_clock::now();
  CommandResult r = run_command("sleep 30 & wait", "", 300ms);
  const auto elapsed = std::chrono::steady_clock::now() - start;
  CHECK(r.timed_out);
  CHECK(elapsed < 10s);
}

TEST_CASE("a command killed by a signal is flagged") {
  CommandResult r = run_command("kill -TERM $$", "", 10s);
  CHECK(!r.ok());
  CHECK(r.signaled);
  CHECK(!r.timed_out);
}

TEST_CASE("a missing binary fails without throwing") {
  CommandResult r = run_command("/no/such/binary_xyz", "", 10s);
  CHECK(!r.ok());
  // /bin/sh reports the missing file as a regular failure
  CHECK(r.exit_code != 0);
}

TEST_CASE("output with no trailing newline is preserved") {
  CommandResult r = run_command("printf '%s' exact", "", 10s);
  CHECK(r.ok());
  CHECK(r.out == "exact");
}
