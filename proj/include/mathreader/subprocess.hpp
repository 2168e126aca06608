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

#ifndef MATHREADER_SUBPROCESS_HPP
#define MATHREADER_SUBPROCESS_HPP

#include <chrono>
#include <string>
#include <string_view>

namespace mathreader {

struct CommandResult {
  int exit_code = -1;
  bool timed_out = false;
  bool signaled = false;     // terminated by a signal (other than our kill)
  bool spawn_failed = false;
  std::string out;           // captured stdout
  std::string err;           // captured stderr

  bool ok() const {
    return !timed_out && !signaled && !spawn_failed && exit_code == 0;
  }
};

// Runs `shell_command` via /bin/sh -c, feeding `stdin_data` and capturing
// both output streams. The child runs in its own process group; when the
// deadline passes the whole group is killed and timed_out is set. Never
// throws; spawn problems surface through spawn_failed.
CommandResult run_command(const std::string& shell_command,
                          std::string_view stdin_data,
                          std::chrono::milliseconds timeout);

}  // namespace mathreader

#endif  // MATHREADER_SUBPROCESS_HPP
