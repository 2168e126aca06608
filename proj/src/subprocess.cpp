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

#include "mathreader/subprocess.hpp"

#include <errno.h>
#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstring>

namespace mathreader {

namespace {

void close_quiet(int& fd) {
  if (fd >= 0) {
    ::close(fd);
    fd = -1;
  }
}

bool set_nonblocking(int fd) {
  const int flags = ::fcntl(fd, F_GETFL, 0);
  return flags >= 0 && ::fcntl(fd, F_SETFL, flags | O_NONBLOCK) == 0;
}

// Drains one readable fd into sink; returns false once the stream is done.
bool drain(int fd, std::string& sink) {
  std::array<char, 4096> buf;
  for (;;) {
    const ssize_t n = ::read(fd, buf.data(), buf.size());
    if (n > 0) {
      sink.append(buf.data(), static_cast<std::size_t>(n));
      continue;
    }
    if (n == 0) return false;
    if (errno == EAGAIN || errno == EWOULDBLOCK) return true;
    if (errno == EINTR) continue;
    return false;
  }
}

}  // namespace

CommandResult run_command(const std::string& shell_command,
                          std::string_view stdin_data,
                          std::chrono::milliseconds timeout) {
  CommandResult result;

  int in_pipe[2] = {-1, -1};
  int out_pipe[2] = {-1, -1};
  int err_pipe[2] = {-1, -1};
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) {
    result.spawn_failed = true;
    for (int* p : {in_pipe, out_pipe, err_pipe}) {
      close_quiet(p[0]);
      close_quiet(p[1]);
    }
    return result;
  }

  const pid_t pid = ::fork();
  if (pid < 0) {
    result.spawn_failed = true;
    for (int* p : {in_pipe, out_pipe, err_pipe}) {
      close_quiet(p[0]);
      close_quiet(p[1]);
    }
    return result;
  }

  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    for (int* p : {in_pipe, out_pipe, err_pipe}) {
      ::close(p[0]);
      ::close(p[1]);
    }
    ::execl("/bin/sh", "sh", "-c", shell_command.c_str(),
            static_cast<char*>(nullptr));
    ::_exit(127);
  }

  ::setpgid(pid, pid);  // also from the parent side to avoid the race
  close_quiet(in_pipe[0]);
  close_quiet(out_pipe[1]);
  close_quiet(err_pipe[1]);

  int write_fd = in_pipe[1];
  int out_fd = out_pipe[0];
  int err_fd = err_pipe[0];
  set_nonblocking(write_fd);
  set_nonblocking(out_fd);
  set_nonblocking(err_fd);

  // Writing into a closed pipe must surface as an error, not kill us.
  ::signal(SIGPIPE, SIG_IGN);

  std::size_t written = 0;
  if (stdin_data.empty()) close_quiet(write_fd);

  const auto deadline = std::chrono::steady_clock::now() + timeout;
  bool killed = false;

  while (out_fd >= 0 || err_fd >= 0 || write_fd >= 0) {
    const auto now = std::chrono::steady_clock::now();
    if (!killed && now >= deadline) {
      ::kill(-pid, SIGKILL);
      killed = true;
      close_quiet(write_fd);
    }
    const auto wait_ms =
        killed ? std::chrono::milliseconds(50)
               : std::chrono::duration_cast<std::chrono::milliseconds>(
                     deadline - now) +
                     std::chrono::milliseconds(1);

    std::array<pollfd, 3> fds{};
    nfds_t nfds = 0;
    auto add = [&](int fd, short events) {
      if (fd >= 0) fds[nfds++] = {fd, events, 0};
    };
    add(out_fd, POLLIN);
    add(err_fd, POLLIN);
    add(write_fd, POLLOUT);

    const int rc =
        ::poll(fds.data(), nfds,
               static_cast<int>(std::min<long long>(wait_ms.count(), 60000)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (rc == 0) continue;  // timeout handling at the top of the loop

    for (nfds_t i = 0; i < nfds; ++i) {
      const pollfd& p = fds[i];
      if (p.revents == 0) continue;
      if (p.fd == out_fd && !drain(out_fd, result.out)) close_quiet(out_fd);
      else if (p.fd == err_fd && !drain(err_fd, result.err)) close_quiet(err_fd);
      else if (p.fd == write_fd) {
        if (p.revents & (POLLERR | POLLHUP)) {
          close_quiet(write_fd);
          continue;
        }
        const ssize_t n = ::write(write_fd, stdin_data.data() + written,
                                  stdin_data.size() - written);
        if (n > 0) {
          written += static_cast<std::size_t>(n);
          if (written == stdin_data.size()) close_quiet(write_fd);
        } else if (n < 0 && errno != EAGAIN && errno != EWOULDBLOCK &&
                   errno != EINTR) {
          close_quiet(write_fd);
        }
      }
    }
  }

  // Pipes may close while the child keeps running; honor the deadline here too.
  int status = 0;
  for (;;) {
    const pid_t r = ::waitpid(pid, &status, killed ? 0 : WNOHANG);
    if (r == pid || (r < 0 && errno != EINTR)) break;
    if (r == 0) {
      if (std::chrono::steady_clock::now() >= deadline) {
        ::kill(-pid, SIGKILL);
        killed = true;
      } else {
        ::poll(nullptr, 0, 5);
      }
    }
  }
  if (killed) {
    result.timed_out = true;
    result.exit_code = -1;
  } else if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.signaled = true;
    result.exit_code = -1;
  }
  return result;
}

}  // namespace mathreader
