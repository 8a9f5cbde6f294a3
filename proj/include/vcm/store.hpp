#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace vcm {

// Every persisted NDJSON table starts with a one-line header naming its
// schema, e.g. {"schema":"records/1"}. Readers reject unknown majors.
struct SchemaVersion {
    std::string name;
    int version = 1;

    std::string header_line() const;

    bool operator==(const SchemaVersion&) const = default;
};

inline const SchemaVersion kRecordsSchema{"records", 1};
inline const SchemaVersion kNvdCacheSchema{"nvd-cache", 1};
inline const SchemaVersion kCommitsSchema{"commits", 1};

std::optional<SchemaVersion> parse_schema_header(std::string_view line);

struct Violation {
    size_t line = 0;  // 1-based
    std::string message;
};

struct ValidationReport {
    bool header_ok = false;
    size_t data_lines = 0;
    std::vector<Violation> violations;

    bool ok() const { return header_ok && violations.empty(); }
};

// Checks the header and per-line conformance of one of the known NDJSON
// tables (records/1, nvd-cache/1, commits/1). Content problems land in the
// report; an unreadable file throws.
ValidationReport validate_file(const std::filesystem::path& file, const SchemaVersion& expected);

// Write-to-temp-then-rename so consumers never observe a partial file.
void atomic_write(const std::filesystem::path& file,
                  const std::function<void(std::ostream&)>& writer);

std::string read_file(const std::filesystem::path& file);  // throws on failure

}  // namespace vcm
