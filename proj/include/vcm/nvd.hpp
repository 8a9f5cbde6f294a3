#pragma once

#include "vcm/refs.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vcm {

enum class Severity { Low, Medium, High, Critical, Unknown };

std::string_view severity_name(Severity severity);
Severity severity_from_name(std::string_view name);  // case-insensitive; anything else is Unknown

// NVD metadata for one CVE. The publish date is mandatory; feed items
// without one are skipped at parse time.
struct CveEntry {
    CveId id;
    int64_t published = 0;            // epoch seconds, UTC
    std::vector<CweId> cwes;          // ascending, duplicate-free
    Severity severity = Severity::Unknown;
    std::optional<double> impact;     // base impact score, within [0, 10]

    bool operator==(const CveEntry&) const = default;
};

struct FeedParseReport {
    size_t items = 0;
    size_t parsed = 0;
    size_t skipped_missing_id = 0;
    size_t skipped_missing_date = 0;
    size_t skipped_malformed = 0;
    size_t scores_out_of_range = 0;

    size_t skipped() const {
        return skipped_missing_id + skipped_missing_date + skipped_malformed;
    }
};

struct FeedError : std::runtime_error {
    size_t byte_offset;
    FeedError(const std::string& what, size_t offset)
        : std::runtime_error(what), byte_offset(offset) {}
};

struct ParsedFeed {
    std::vector<CveEntry> entries;
    FeedParseReport report;
};

// Parses an NVD JSON 1.1 data feed (the "CVE_Items" array). Severity and the
// base impact score come from the highest CVSS block present, v3 preferred
// over v2. Problemtype values that are not plain "CWE-N" (NVD-CWE-noinfo,
// NVD-CWE-Other, ...) contribute no CWE. A feed that does not parse at all
// throws FeedError with the byte offset; defective items only bump counters.
ParsedFeed parse_feed(std::string_view json_text);

bool looks_gzip(std::string_view bytes);
std::string gunzip(std::string_view bytes);  // throws std::runtime_error on a broken stream

// In-memory CVE lookup table fed from one or more feeds. Later ingests win
// for ids seen twice. Persists as the nvd-cache/1 NDJSON table.
class NvdCache {
public:
    void ingest(std::vector<CveEntry> entries, const std::string& feed_name, int64_t ingested_at);

    // Reads a feed file (gzip or plain), parses and ingests it.
    FeedParseReport ingest_file(const std::filesystem::path& feed_file);

    const CveEntry* lookup(const CveId& id) const;

    size_t size() const { return entries_.size(); }
    const std::map<CveId, CveEntry>& entries() const { return entries_; }
    const std::vector<std::pair<std::string, int64_t>>& feed_versions() const { return feeds_; }

    void save(const std::filesystem::path& file) const;
    static NvdCache load(const std::filesystem::path& file);  // throws on defects

private:
    std::map<CveId, CveEntry> entries_;
    std::vector<std::pair<std::string, int64_t>> feeds_;
};

// CWE categories a commit's references resolve to: CWE lists of every CVE
// found in the cache, plus CWEs referenced directly in the message.
struct ResolvedRefs {
    std::set<CweId> cwes;                              // direct_cwes ∪ resolved CWE lists
    std::vector<std::pair<CveId, CveEntry>> resolved;  // sorted by id
    std::vector<CveId> unresolved;                     // sorted; disjoint from resolved
    std::set<CweId> direct_cwes;

    bool operator==(const ResolvedRefs&) const = default;
};

ResolvedRefs resolve_refs(const VulnRefSet& refs, const NvdCache& cache);

}  // namespace vcm
