#include "genpatch/process.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstring>

#include "genpatch/common.hpp"

namespace genpatch {

ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& cwd, double timeout_seconds) {
  if (argv.empty()) throw Error("process", "empty command");
  int out_pipe[2], err_pipe[2];
  if (pipe(out_pipe) != 0 || pipe(err_pipe) != 0)
    throw Error("process", std::string("pipe: ") + std::strerror(errno));

  pid_t pid = fork();
  if (pid < 0) throw Error("process", std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    setpgid(0, 0);
    int devnull = open("/dev/null", O_RDONLY);
    if (devnull >= 0) dup2(devnull, 0);
    dup2(out_pipe[1], 1);
    dup2(err_pipe[1], 2);
    close(out_pipe[0]);
    close(err_pipe[0]);
    close(out_pipe[1]);
    close(err_pipe[1]);
    if (!cwd.empty() && chdir(cwd.c_str()) != 0) _exit(126);
    std::vector<char*> args;
    for (const auto& a : argv) args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);
    execvp(args[0], args.data());
    _exit(127);
  }
  setpgid(pid, pid);
  close(out_pipe[1]);
  close(err_pipe[1]);

  ProcessResult res;
  const auto start = std::chrono::steady_clock::now();
  pollfd fds[2] = {{out_pipe[0], POLLIN, 0}, {err_pipe[0], POLLIN, 0}};
  int open_fds = 2;
  char buf[4096];
  while (open_fds > 0) {
    int wait_ms = 100;
    if (timeout_seconds > 0) {
      double elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
      if (elapsed >= timeout_seconds) {
        res.timed_out = true;
        kill(-pid, SIGKILL);
        break;
      }
    }
    int rc = poll(fds, 2, wait_ms);
    if (rc < 0 && errno != EINTR) break;
    for (auto& f : fds) {
      if (f.fd < 0 || !(f.revents & (POLLIN | POLLHUP | POLLERR))) continue;
      ssize_t n = read(f.fd, buf, sizeof buf);
      if (n <= 0) {
        close(f.fd);
        f.fd = -1;
        --open_fds;
      } else {
        (f.fd == out_pipe[0] ? res.out : res.err).append(buf, static_cast<size_t>(n));
      }
    }
  }
  for (auto& f : fds)
    if (f.fd >= 0) close(f.fd);

  int status = 0;
  while (true) {
    pid_t w = waitpid(pid, &status, res.timed_out ? 0 : WNOHANG);
    if (w == pid) break;
    if (w < 0 && errno != EINTR) break;
    if (w == 0) {
      // Streams closed but the child lingers (e.g. a detached grandchild kept
      // the pipe); honour the timeout here too.
      double elapsed = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
      if (timeout_seconds > 0 && elapsed >= timeout_seconds) {
        res.timed_out = true;
        kill(-pid, SIGKILL);
      }
      usleep(2000);
    }
  }
  kill(-pid, SIGKILL);  // reap stragglers in the group
  if (!res.timed_out && WIFEXITED(status)) res.exit_code = WEXITSTATUS(status);
  return res;
}

ProcessResult run_shell(const std::string& command, const std::string& cwd,
                        double timeout_seconds) {
  return run_process({"/bin/sh", "-c", command}, cwd, timeout_seconds);
}

}  // namespace genpatch
