#pragma once

#include "vcm/lang.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace vcm {

// One revision, carrying exactly what the pipeline needs downstream.
struct CommitRecord {
    std::string repo_id;
    std::string commit_id;       // hex digest
    int64_t author_date = 0;     // epoch seconds, UTC
    int64_t committer_date = 0;
    std::string message;
    RootListing root_entries;    // base names in the commit's root tree

    bool operator==(const CommitRecord&) const = default;
};

enum class DateField { Author, Committer };
enum class BranchPolicy { AllRefs, DefaultBranch };

struct ScanConfig {
    DateField date_field = DateField::Committer;
    std::optional<int64_t> since;  // inclusive, applied to the configured date field
    std::optional<int64_t> until;  // inclusive
    BranchPolicy branches = BranchPolicy::AllRefs;
};

int64_t commit_date(const CommitRecord& commit, DateField field);

struct ScanError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScanReport {
    size_t seen = 0;      // commits the traversal yielded
    size_t emitted = 0;
    size_t filtered = 0;  // outside since/until
    size_t skipped = 0;   // unparseable or corrupt entries
};

using CommitSink = std::function<void(CommitRecord&&)>;

// Streams every commit reachable under the branch policy exactly once,
// deduplicated by id. Traversal and root-tree listing run over pipes to git
// so arbitrarily large histories stream in constant memory.
ScanReport scan_repository(const std::filesystem::path& repo, const std::string& repo_id,
                           const ScanConfig& cfg, const CommitSink& sink);

// Portable commit export: the commits/1 NDJSON table. One object per line
// with keys repo, id, author_date, committer_date, message, root.
struct ExportReadReport {
    size_t lines = 0;
    size_t records = 0;
    size_t skipped = 0;  // malformed or missing a required key
};

void write_export_header(std::ostream& out);
void write_export_record(std::ostream& out, const CommitRecord& commit);

// Reads records in file order. A leading schema header line is consumed when
// present (unknown majors are rejected); bad data lines are skipped and
// counted.
ExportReadReport read_export(std::istream& in, const CommitSink& sink);

}  // namespace vcm
