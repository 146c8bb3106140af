#pragma once

// Bridge to an external base solver. The command is run through /bin/sh, gets
// a SystemFile on stdin and must print a SolutionFile on stdout. Returned
// points are re-checked against the system locally.

#include "sparsedecomp/errors.hpp"
#include "sparsedecomp/io.hpp"
#include "sparsedecomp/polynomial.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <string>
#include <vector>

#include <fcntl.h>
#include <poll.h>
#include <sys/wait.h>
#include <unistd.h>

namespace sparsedecomp {

struct ProcessResult {
  int exit_code = -1;
  std::string output;
};

namespace detail {

class SigpipeGuard {
 public:
  SigpipeGuard() {
    struct sigaction ignore {};
    ignore.sa_handler = SIG_IGN;
    sigemptyset(&ignore.sa_mask);
    sigaction(SIGPIPE, &ignore, &old_);
  }
  ~SigpipeGuard() { sigaction(SIGPIPE, &old_, nullptr); }
  SigpipeGuard(const SigpipeGuard&) = delete;
  SigpipeGuard& operator=(const SigpipeGuard&) = delete;

 private:
  struct sigaction old_ {};
};

class Fd {
 public:
  explicit Fd(int fd = -1) : fd_(fd) {}
  ~Fd() { reset(); }
  Fd(Fd&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
  Fd& operator=(Fd&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = o.fd_;
      o.fd_ = -1;
    }
    return *this;
  }
  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_;
};

}  // namespace detail

// Runs `command` with `input` on stdin and collects stdout. Throws
// SubprocessFailure on spawn errors or when `timeout_seconds` elapses.
inline ProcessResult run_command(const std::string& command, const std::string& input, double timeout_seconds) {
  detail::SigpipeGuard guard;
  int in_pipe[2], out_pipe[2];
  if (::pipe(in_pipe) != 0) throw SubprocessFailure(std::string("pipe: ") + std::strerror(errno));
  if (::pipe(out_pipe) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw SubprocessFailure(std::string("pipe: ") + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) throw SubprocessFailure(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    ::_exit(127);
  }
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  detail::Fd to_child(in_pipe[1]), from_child(out_pipe[0]);
  ::fcntl(to_child.get(), F_SETFL, O_NONBLOCK);
  ::fcntl(from_child.get(), F_SETFL, O_NONBLOCK);

  const auto deadline = std::chrono::steady_clock::now() + std::chrono::duration<double>(timeout_seconds);
  std::size_t written = 0;
  if (input.empty()) to_child.reset();
  ProcessResult result;
  char buf[65536];
  bool open = true;
  while (open) {
    const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - std::chrono::steady_clock::now());
    if (left.count() <= 0) {
      ::kill(pid, SIGKILL);
      ::waitpid(pid, nullptr, 0);
      throw SubprocessFailure("external solver timed out after " + std::to_string(timeout_seconds) + " s");
    }
    pollfd fds[2];
    nfds_t count = 0;
    fds[count++] = {from_child.get(), POLLIN, 0};
    if (to_child.get() >= 0) fds[count++] = {to_child.get(), POLLOUT, 0};
    const int ready = ::poll(fds, count, static_cast<int>(std::min<long long>(left.count(), 1000)));
    if (ready < 0 && errno != EINTR) break;
    if (count == 2 && (fds[1].revents & (POLLOUT | POLLERR | POLLHUP))) {
      const ssize_t w = ::write(to_child.get(), input.data() + written, input.size() - written);
      if (w > 0) written += static_cast<std::size_t>(w);
      if (w < 0 && errno != EAGAIN) to_child.reset();  // child stopped reading
      if (written == input.size()) to_child.reset();
    }
    if (fds[0].revents & (POLLIN | POLLHUP | POLLERR)) {
      const ssize_t r = ::read(from_child.get(), buf, sizeof buf);
      if (r > 0)
        result.output.append(buf, static_cast<std::size_t>(r));
      else if (r == 0 || errno != EAGAIN)
        open = false;
    }
  }
  to_child.reset();
  int status = 0;
  ::waitpid(pid, &status, 0);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

// Solves F with an external program speaking the SystemFile / SolutionFile
// protocol. Points off the torus (any |x_i| <= tolerance) or with scaled
// residual above 1e-6 are discarded.
inline std::vector<Point> external_solver_adapter(const std::string& command, const SparseSystem& F,
                                                  double tolerance = 1e-5, double timeout_seconds = 600.0) {
  const auto run = run_command(command, system_to_json(F).dump() + "\n", timeout_seconds);
  if (run.exit_code != 0)
    throw SubprocessFailure("external solver exited with status " + std::to_string(run.exit_code));
  SolutionFile file;
  try {
    file = solution_file_from_json(parse_json(run.output));
  } catch (const Error& e) {
    throw SubprocessFailure(std::string("external solver output rejected: ") + e.what());
  } catch (const Json::exception& e) {
    throw SubprocessFailure(std::string("external solver output rejected: ") + e.what());
  }
  std::vector<Point> out;
  for (auto& s : file.solutions) {
    if (static_cast<std::size_t>(s.point.size()) != F.size()) continue;
    bool torus = s.point.allFinite();
    for (Eigen::Index i = 0; i < s.point.size(); ++i) torus = torus && std::abs(s.point[i]) > tolerance;
    if (!torus) continue;
    if (!(relative_residual(F, s.point) <= 1e-6)) continue;
    out.push_back(std::move(s.point));
  }
  return out;
}

}  // namespace sparsedecomp
