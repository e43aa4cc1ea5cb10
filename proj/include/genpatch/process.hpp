#pragma once

#include <string>
#include <vector>

namespace genpatch {

struct ProcessResult {
  int exit_code = -1;  // -1 when killed by a signal or the timeout
  bool timed_out = false;
  std::string out;
  std::string err;
};

/// Run `argv` (argv[0] resolved on PATH) in `cwd`, capturing both streams.
/// `timeout_seconds` <= 0 disables the timeout; on expiry the whole process
/// group is killed.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& cwd = "",
                          double timeout_seconds = 0);

/// `/bin/sh -c command`.
ProcessResult run_shell(const std::string& command, const std::string& cwd,
                        double timeout_seconds);

}  // namespace genpatch
