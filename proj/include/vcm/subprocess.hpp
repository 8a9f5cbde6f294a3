#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace vcm {

struct SubprocessError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bidirectional pipe to a child process. stderr is inherited from the
// parent. The destructor closes both ends and reaps the child.
class Subprocess {
public:
    explicit Subprocess(const std::vector<std::string>& argv,
                        const std::vector<std::pair<std::string, std::string>>& extra_env = {});
    ~Subprocess();

    Subprocess(const Subprocess&) = delete;
    Subprocess& operator=(const Subprocess&) = delete;

    void write_all(std::string_view data);
    void close_stdin();
    size_t read_some(char* buf, size_t cap);  // 0 means EOF

    // Waits for exit; returns the exit code (128+signal when killed).
    int wait();

private:
    int pid_ = -1;
    int in_fd_ = -1;   // child's stdin, write side
    int out_fd_ = -1;  // child's stdout, read side
    int exit_code_ = -1;
    bool reaped_ = false;
};

struct RunResult {
    int exit_code = -1;
    std::string out;
};

// Convenience wrapper: feed stdin, run to completion, capture stdout.
RunResult run_capture(const std::vector<std::string>& argv,
                      const std::vector<std::pair<std::string, std::string>>& extra_env = {},
                      std::string_view stdin_data = {});

}  // namespace vcm
