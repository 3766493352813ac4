#pragma once

#include <filesystem>
#include <string>

namespace pianoaug {

struct ProcessResult {
    int exit_code = -1;
    bool timed_out = false;
    bool ok() const { return !timed_out && exit_code == 0; }
};

/// Run `command` through /bin/sh in its own process group; stdout and stderr
/// go to `log_file` (or /dev/null when empty). On timeout the whole group is
/// killed. Throws IoError only if the process cannot be started.
ProcessResult run_shell(const std::string& command, double timeout_s, const std::filesystem::path& log_file = {});

/// Single-quote `s` for /bin/sh.
std::string shell_quote(const std::string& s);

}  // namespace pianoaug
