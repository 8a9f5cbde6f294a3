#include "vcm/subprocess.hpp"

#include <cerrno>
#include <cstring>

#include <fcntl.h>
#include <sys/wait.h>
#include <unistd.h>

extern char** environ;

namespace vcm {

namespace {

[[noreturn]] void child_exec(const std::vector<std::string>& argv,
                             const std::vector<std::pair<std::string, std::string>>& extra_env,
                             int in_read, int out_write) {
    ::dup2(in_read, STDIN_FILENO);
    ::dup2(out_write, STDOUT_FILENO);
    ::close(in_read);
    ::close(out_write);

    std::vector<std::string> env_storage;
    for (char** e = environ; *e; ++e) {
        std::string_view entry(*e);
        bool overridden = false;
        for (const auto& [key, _] : extra_env) {
            if (entry.size() > key.size() && entry.compare(0, key.size(), key) == 0 &&
                entry[key.size()] == '=') {
                overridden = true;
                break;
            }
        }
        if (!overridden)
            env_storage.emplace_back(entry);
    }
    for (const auto& [key, value] : extra_env)
        env_storage.push_back(key + "=" + value);

    std::vector<char*> args;
    args.reserve(argv.size() + 1);
    for (const auto& a : argv)
        args.push_back(const_cast<char*>(a.c_str()));
    args.push_back(nullptr);

    std::vector<char*> envp;
    envp.reserve(env_storage.size() + 1);
    for (const auto& e : env_storage)
        envp.push_back(const_cast<char*>(e.c_str()));
    envp.push_back(nullptr);

    ::execvpe(args[0], args.data(), envp.data());
    ::_exit(127);
}

}  // namespace

Subprocess::Subprocess(const std::vector<std::string>& argv,
                       const std::vector<std::pair<std::string, std::string>>& extra_env) {
    if (argv.empty())
        throw SubprocessError("empty argv");

    int to_child[2];   // parent writes → child stdin
    int from_child[2]; // child stdout → parent reads
    if (::pipe(to_child) != 0)
        throw SubprocessError(std::string("pipe: ") + std::strerror(errno));
    if (::pipe(from_child) != 0) {
        ::close(to_child[0]);
        ::close(to_child[1]);
        throw SubprocessError(std::string("pipe: ") + std::strerror(errno));
    }

    pid_ = ::fork();
    if (pid_ < 0) {
        ::close(to_child[0]);
        ::close(to_child[1]);
        ::close(from_child[0]);
        ::close(from_child[1]);
        throw SubprocessError(std::string("fork: ") + std::strerror(errno));
    }
    if (pid_ == 0) {
        ::close(to_child[1]);
        ::close(from_child[0]);
        child_exec(argv, extra_env, to_child[0], from_child[1]);
    }

    ::close(to_child[0]);
    ::close(from_child[1]);
    in_fd_ = to_child[1];
    out_fd_ = from_child[0];
}

Subprocess::~Subprocess() {
    close_stdin();
    if (out_fd_ >= 0) {
        ::close(out_fd_);
        out_fd_ = -1;
    }
    if (!reaped_ && pid_ > 0) {
        int status = 0;
        ::waitpid(pid_, &status, 0);
        reaped_ = true;
    }
}

void Subprocess::write_all(std::string_view data) {
    while (!data.empty()) {
        ssize_t n = ::write(in_fd_, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw SubprocessError(std::string("write to child: ") + std::strerror(errno));
        }
        data.remove_prefix(static_cast<size_t>(n));
    }
}

void Subprocess::close_stdin() {
    if (in_fd_ >= 0) {
        ::close(in_fd_);
        in_fd_ = -1;
    }
}

size_t Subprocess::read_some(char* buf, size_t cap) {
    while (true) {
        ssize_t n = ::read(out_fd_, buf, cap);
        if (n < 0) {
            if (errno == EINTR)
                continue;
            throw SubprocessError(std::string("read from child: ") + std::strerror(errno));
        }
        return static_cast<size_t>(n);
    }
}

int Subprocess::wait() {
    if (reaped_)
        return exit_code_;
    close_stdin();
    int status = 0;
    if (::waitpid(pid_, &status, 0) < 0)
        throw SubprocessError(std::string("waitpid: ") + std::strerror(errno));
    reaped_ = true;
    if (WIFEXITED(status))
        exit_code_ = WEXITSTATUS(status);
    else if (WIFSIGNALED(status))
        exit_code_ = 128 + WTERMSIG(status);
    else
        exit_code_ = -1;
    return exit_code_;
}

RunResult run_capture(const std::vector<std::string>& argv,
                      const std::vector<std::pair<std::string, std::string>>& extra_env,
                      std::string_view stdin_data) {
    Subprocess proc(argv, extra_env);
    if (!stdin_data.empty())
        proc.write_all(stdin_data);
    proc.close_stdin();

    RunResult result;
    char buf[1 << 14];
    while (size_t n = proc.read_some(buf, sizeof(buf)))
        result.out.append(buf, n);
    result.exit_code = proc.wait();
    return result;
}

}  // namespace vcm
