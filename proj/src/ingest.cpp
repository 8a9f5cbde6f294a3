#include "vcm/ingest.hpp"

#include "vcm/store.hpp"
#include "vcm/subprocess.hpp"
#include "vcm/time_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace vcm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Buffered reader over a child's stdout.
class PipeReader {
public:
    explicit PipeReader(Subprocess& proc) : proc_(proc) {}

    // Fills `out` with bytes up to (not including) `delim`. False on EOF
    // before the delimiter.
    bool read_until(char delim, std::string& out) {
        out.clear();
        while (true) {
            size_t i = buf_.find(delim, pos_);
            if (i != std::string::npos) {
                out.append(buf_, pos_, i - pos_);
                pos_ = i + 1;
                compact();
                return true;
            }
            out.append(buf_, pos_, buf_.size() - pos_);
            pos_ = buf_.size();
            compact();
            if (!refill())
                return false;
        }
    }

    bool read_exact(size_t n, std::string& out) {
        out.clear();
        while (out.size() < n) {
            size_t take = std::min(n - out.size(), buf_.size() - pos_);
            out.append(buf_, pos_, take);
            pos_ += take;
            compact();
            if (out.size() < n && !refill())
                return false;
        }
        return true;
    }

    bool skip_char(char expected) {
        if (pos_ == buf_.size() && !refill())
            return false;
        if (buf_[pos_] != expected)
            return false;
        ++pos_;
        return true;
    }

private:
    bool refill() {
        if (pos_ == buf_.size()) {
            buf_.clear();
            pos_ = 0;
        }
        char chunk[1 << 16];
        size_t n = proc_.read_some(chunk, sizeof(chunk));
        if (n == 0)
            return false;
        buf_.append(chunk, n);
        return true;
    }

    void compact() {
        if (pos_ > (1 << 20)) {
            buf_.erase(0, pos_);
            pos_ = 0;
        }
    }

    Subprocess& proc_;
    std::string buf_;
    size_t pos_ = 0;
};

bool is_hex(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
    });
}

std::optional<int64_t> parse_epoch(std::string_view s) {
    if (s.empty())
        return std::nullopt;
    errno = 0;
    char* end = nullptr;
    std::string tmp(s);
    long long v = std::strtoll(tmp.c_str(), &end, 10);
    if (errno != 0 || end != tmp.c_str() + tmp.size())
        return std::nullopt;
    return static_cast<int64_t>(v);
}

// Serves root-tree listings through one long-lived `git cat-file --batch`.
class TreeLister {
public:
    explicit TreeLister(const std::string& repo)
        : proc_({"git", "-C", repo, "cat-file", "--batch"}), reader_(proc_) {}

    // Base names of the entries of `tree_id`; nullopt when the object is
    // missing or unreadable.
    std::optional<RootListing> list(const std::string& tree_id) {
        auto cached = cache_.find(tree_id);
        if (cached != cache_.end())
            return cached->second;

        proc_.write_all(tree_id + "\n");
        std::string header;
        if (!reader_.read_until('\n', header))
            return std::nullopt;
        // "<oid> tree <size>" or "<oid> missing"
        size_t sp1 = header.find(' ');
        if (sp1 == std::string::npos)
            return std::nullopt;
        std::string_view rest = std::string_view(header).substr(sp1 + 1);
        if (rest == "missing")
            return std::nullopt;
        size_t sp2 = rest.find(' ');
        if (sp2 == std::string::npos || rest.substr(0, sp2) != "tree")
            return std::nullopt;
        auto size = parse_epoch(rest.substr(sp2 + 1));
        if (!size || *size < 0)
            return std::nullopt;

        std::string raw;
        if (!reader_.read_exact(static_cast<size_t>(*size), raw) || !reader_.skip_char('\n'))
            return std::nullopt;

        auto listing = parse_tree(raw, tree_id.size() == 64 ? 32 : 20);
        if (listing)
            cache_.emplace(tree_id, *listing);
        return listing;
    }

private:
    static std::optional<RootListing> parse_tree(std::string_view raw, size_t hash_len) {
        RootListing names;
        size_t pos = 0;
        while (pos < raw.size()) {
            size_t sp = raw.find(' ', pos);
            if (sp == std::string_view::npos)
                return std::nullopt;
            size_t nul = raw.find('\0', sp + 1);
            if (nul == std::string_view::npos || nul + 1 + hash_len > raw.size())
                return std::nullopt;
            names.insert(std::string(raw.substr(sp + 1, nul - sp - 1)));
            pos = nul + 1 + hash_len;
        }
        return names;
    }

    Subprocess proc_;
    PipeReader reader_;
    std::unordered_map<std::string, RootListing> cache_;
};

}  // namespace

int64_t commit_date(const CommitRecord& commit, DateField field) {
    return field == DateField::Author ? commit.author_date : commit.committer_date;
}

ScanReport scan_repository(const std::filesystem::path& repo, const std::string& repo_id,
                           const ScanConfig& cfg, const CommitSink& sink) {
    const std::string repo_str = repo.string();

    if (run_capture({"git", "-C", repo_str, "rev-parse", "--git-dir"}).exit_code != 0)
        throw ScanError("not a readable git repository: " + repo_str);

    if (cfg.branches == BranchPolicy::DefaultBranch &&
        run_capture({"git", "-C", repo_str, "rev-parse", "--verify", "-q", "HEAD"}).exit_code != 0)
        return {};  // unborn HEAD

    std::vector<std::string> argv = {
        "git", "-C", repo_str, "rev-list",
        cfg.branches == BranchPolicy::AllRefs ? "--all" : "HEAD",
        "--date-order", "--format=%H%x00%T%x00%at%x00%ct%x00%B%x00"};
    Subprocess log(argv);
    log.close_stdin();
    PipeReader reader(log);
    TreeLister trees(repo_str);

    ScanReport report;
    std::unordered_set<std::string> seen_ids;
    std::string header, hash, tree, author_ts, committer_ts, body;

    while (true) {
        // "commit <sha>", possibly preceded by the previous record's newline
        if (!reader.read_until('\n', header))
            break;
        if (header.empty())
            continue;
        if (!header.starts_with("commit ")) {
            ++report.skipped;
            continue;
        }
        if (!reader.read_until('\0', hash) || !reader.read_until('\0', tree) ||
            !reader.read_until('\0', author_ts) || !reader.read_until('\0', committer_ts) ||
            !reader.read_until('\0', body)) {
            ++report.skipped;
            break;  // truncated stream
        }
        ++report.seen;

        auto author = parse_epoch(author_ts);
        auto committer = parse_epoch(committer_ts);
        if (!is_hex(hash) || hash.size() < 40 || !is_hex(tree) || !author || !committer) {
            ++report.skipped;
            continue;
        }
        if (!seen_ids.insert(hash).second)
            continue;

        CommitRecord record;
        record.repo_id = repo_id;
        record.commit_id = hash;
        record.author_date = *author;
        record.committer_date = *committer;
        record.message = body;

        int64_t date = commit_date(record, cfg.date_field);
        if ((cfg.since && date < *cfg.since) || (cfg.until && date > *cfg.until)) {
            ++report.filtered;
            continue;
        }

        auto listing = trees.list(tree);
        if (!listing) {
            ++report.skipped;
            continue;
        }
        record.root_entries = std::move(*listing);

        sink(std::move(record));
        ++report.emitted;
    }

    if (int rc = log.wait(); rc != 0)
        throw ScanError("git rev-list exited with status " + std::to_string(rc) + " for " +
                        repo_str);
    return report;
}

void write_export_header(std::ostream& out) {
    out << kCommitsSchema.header_line() << '\n';
}

void write_export_record(std::ostream& out, const CommitRecord& commit) {
    ordered_json line;
    line["repo"] = commit.repo_id;
    line["id"] = commit.commit_id;
    line["author_date"] = format_utc(commit.author_date);
    line["committer_date"] = format_utc(commit.committer_date);
    line["message"] = commit.message;
    json root = json::array();
    for (const auto& name : commit.root_entries)
        root.push_back(name);
    line["root"] = std::move(root);
    // Messages are not guaranteed to be valid UTF-8; replace bad sequences.
    out << line.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
}

ExportReadReport read_export(std::istream& in, const CommitSink& sink) {
    ExportReadReport report;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (first) {
            first = false;
            if (auto header = parse_schema_header(line)) {
                if (header->name != kCommitsSchema.name ||
                    header->version != kCommitsSchema.version)
                    throw std::runtime_error("unsupported commit export schema: " +
                                             header->name + "/" +
                                             std::to_string(header->version));
                continue;  // header consumed, not a data line
            }
        }
        ++report.lines;
        json row = json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.is_object()) {
            ++report.skipped;
            continue;
        }
        CommitRecord record;
        try {
            record.repo_id = row.at("repo").get<std::string>();
            record.commit_id = row.at("id").get<std::string>();
            auto author = parse_utc(row.at("author_date").get<std::string>());
            auto committer = parse_utc(row.at("committer_date").get<std::string>());
            if (!author || !committer)
                throw std::runtime_error("bad date");
            record.author_date = *author;
            record.committer_date = *committer;
            record.message = row.at("message").get<std::string>();
            for (const auto& name : row.at("root"))
                record.root_entries.insert(name.get<std::string>());
        } catch (const std::exception&) {
            ++report.skipped;
            continue;
        }
        sink(std::move(record));
        ++report.records;
    }
    return report;
}

}  // namespace vcm
