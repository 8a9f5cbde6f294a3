#pragma once

#include "vcm/subprocess.hpp"
#include "vcm/time_util.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcm::test {

// Builds throwaway git repositories with pinned identities and dates so
// commit hashes are reproducible across runs.
class GitFixture {
public:
    explicit GitFixture(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
        git({"init", "-q", "-b", "main", dir_.string()}, false);
    }

    const std::filesystem::path& dir() const { return dir_; }

    void write(const std::string& name, const std::string& contents) {
        auto target = dir_ / name;
        std::filesystem::create_directories(target.parent_path());
        std::ofstream out(target, std::ios::binary);
        out << contents;
    }

    void remove(const std::string& name) { std::filesystem::remove(dir_ / name); }

    std::string commit(const std::string& message, int64_t author_date, int64_t committer_date) {
        git({"add", "-A"});
        std::string author = "@" + std::to_string(author_date) + " +0000";
        std::string committer = "@" + std::to_string(committer_date) + " +0000";
        run({"git", "-C", dir_.string(), "-c", "user.name=Fixture", "-c",
             "user.email=fixture@example.invalid", "-c", "commit.gpgsign=false", "commit", "-q",
             "--allow-empty", "--allow-empty-message", "-F", "-"},
            message,
            {{"GIT_AUTHOR_DATE", author}, {"GIT_COMMITTER_DATE", committer}});
        return head();
    }

    void branch(const std::string& name, const std::string& start = "HEAD") {
        git({"branch", name, start});
    }

    void checkout(const std::string& name) { git({"checkout", "-q", name}); }

    std::string head() {
        auto result = run({"git", "-C", dir_.string(), "rev-parse", "HEAD"});
        while (!result.empty() && (result.back() == '\n' || result.back() == '\r'))
            result.pop_back();
        return result;
    }

    size_t rev_list_count(const std::string& range = "--all") {
        auto text = run({"git", "-C", dir_.string(), "rev-list", "--count", range});
        return std::stoull(text);
    }

    std::string git(std::vector<std::string> args, bool in_repo = true) {
        std::vector<std::string> argv = {"git"};
        if (in_repo) {
            argv.push_back("-C");
            argv.push_back(dir_.string());
        }
        argv.insert(argv.end(), args.begin(), args.end());
        return run(argv);
    }

private:
    static std::string run(const std::vector<std::string>& argv, std::string_view stdin_data = {},
                           std::vector<std::pair<std::string, std::string>> env = {}) {
        env.emplace_back("GIT_CONFIG_GLOBAL", "/dev/null");
        env.emplace_back("GIT_CONFIG_SYSTEM", "/dev/null");
        auto result = run_capture(argv, env, stdin_data);
        if (result.exit_code != 0) {
            std::string cmd;
            for (const auto& a : argv)
                cmd += a + " ";
            throw std::runtime_error("fixture command failed (" +
                                     std::to_string(result.exit_code) + "): " + cmd);
        }
        return result.out;
    }

    std::filesystem::path dir_;
};

}  // namespace vcm::test
