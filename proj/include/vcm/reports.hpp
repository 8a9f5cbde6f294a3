#pragma once

#include "vcm/analytics.hpp"

#include <filesystem>
#include <iosfwd>

namespace vcm {

// Persistence for the intermediate tables and emission of the report files.
// Output is deterministic: rows sort year-ascending, JavaScript before
// Python, CWE numbers ascending; decimals carry three fractional digits.

void write_records_file(const std::filesystem::path& file,
                        const std::vector<MitigationRecord>& records);

struct RecordReadResult {
    std::vector<MitigationRecord> records;
    // resolved ids from the file that the current cache no longer knows;
    // they are demoted to unresolved
    size_t stale_cves = 0;
};

RecordReadResult read_records_file(const std::filesystem::path& file, const NvdCache& cache);

void write_totals_file(const std::filesystem::path& file, const CountMap& raw_totals);
CountMap read_totals_file(const std::filesystem::path& file);

void write_year_stats(std::ostream& out, const CountMap& vuln, const CountMap& totals,
                      const AnalyticsOptions& opt);
void write_ratio(std::ostream& out, const std::vector<YearLangStat>& stats);
void write_cwe_counts(std::ostream& out, const CweDistribution& distribution,
                      const AnalyticsOptions& opt);
void write_reaction_by_year(std::ostream& out, const std::vector<YearReaction>& stats);
void write_reaction_by_cwe(std::ostream& out, const std::vector<CweReaction>& stats);
void write_overlap(std::ostream& out, const OverlapSummary& overlap);

}  // namespace vcm
