#include "pianoaug/subprocess.hpp"

#include "pianoaug/error.hpp"

#include <cerrno>
#include <chrono>
#include <csignal>
#include <cstring>
#include <fcntl.h>
#include <fmt/format.h>
#include <sys/wait.h>
#include <thread>
#include <unistd.h>

namespace pianoaug {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "'\\''";
        else
            out += c;
    }
    out += '\'';
    return out;
}

ProcessResult run_shell(const std::string& command, double timeout_s, const std::filesystem::path& log_file) {
    // Everything the child touches is prepared before fork.
    const std::string log = log_file.empty() ? std::string("/dev/null") : log_file.string();
    const char* argv[] = {"/bin/sh", "-c", command.c_str(), nullptr};

    const pid_t pid = fork();
    if (pid < 0) throw Error(Errc::IoError, fmt::format("fork failed: {}", std::strerror(errno)));
    if (pid == 0) {
        setpgid(0, 0);
        const int fd = open(log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd >= 0) {
            dup2(fd, STDOUT_FILENO);
            dup2(fd, STDERR_FILENO);
            close(fd);
        }
        const int null_in = open("/dev/null", O_RDONLY);
        if (null_in >= 0) dup2(null_in, STDIN_FILENO);
        execv("/bin/sh", const_cast<char* const*>(argv));
        _exit(127);
    }
    setpgid(pid, pid);

    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::duration<double>(timeout_s);
    auto pause = std::chrono::microseconds(200);
    ProcessResult result;
    for (;;) {
        int status = 0;
        const pid_t r = waitpid(pid, &status, WNOHANG);
        if (r == pid) {
            result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : 128 + WTERMSIG(status);
            return result;
        }
        if (r < 0 && errno != EINTR) throw Error(Errc::IoError, fmt::format("waitpid failed: {}", std::strerror(errno)));
        if (timeout_s > 0.0 && clock::now() >= deadline) {
            kill(-pid, SIGKILL);
            waitpid(pid, &status, 0);
            result.timed_out = true;
            return result;
        }
        std::this_thread::sleep_for(pause);
        pause = std::min(pause * 2, std::chrono::microseconds(20000));
    }
}

}  // namespace pianoaug
