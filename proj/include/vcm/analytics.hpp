#pragma once

#include "vcm/ingest.hpp"
#include "vcm/nvd.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace vcm {

// The unit of every statistic: one commit whose message carried at least one
// extracted reference, joined with its project language and resolved CWEs.
struct MitigationRecord {
    std::string commit_id;
    std::string repo_id;
    ProjectLanguage language = ProjectLanguage::Unknown;
    int64_t date = 0;  // per the configured date field
    ResolvedRefs resolved;
};

// (year, language) counters. Keys hold raw classification variants; Both and
// Unknown are expanded or dropped only when a statistic is computed.
using YearLangKey = std::pair<int, ProjectLanguage>;
using CountMap = std::map<YearLangKey, uint64_t>;

struct BuildStats {
    size_t commits = 0;
    size_t records = 0;
    size_t false_positives = 0;
    size_t duplicates = 0;
};

// Order-agnostic reducer input: feeds commits through message
// classification, language classification and NVD resolution. Every commit
// lands in the totals; only commits with references become records.
class RecordBuilder {
public:
    RecordBuilder(DateField date_field, const NvdCache* cache, bool global_dedup = false)
        : date_field_(date_field), cache_(cache), global_dedup_(global_dedup) {}

    void add(const CommitRecord& commit);

    std::vector<MitigationRecord> take_records() { return std::move(records_); }
    const CountMap& totals() const { return totals_; }
    const BuildStats& stats() const { return stats_; }

private:
    DateField date_field_;
    const NvdCache* cache_;
    bool global_dedup_;
    std::set<std::string> seen_;
    std::vector<MitigationRecord> records_;
    CountMap totals_;
    BuildStats stats_;
};

struct AnalyticsOptions {
    bool include_both = true;     // fan Both records/totals into both languages
    bool include_unknown = false; // carry Unknown as a third series
    std::optional<int> year_min;
    std::optional<int> year_max;
};

// The per-language series a record of the given classification contributes
// to: Python → {Python}; Both → {JavaScript, Python} unless excluded;
// Unknown → {Unknown} only when included.
std::vector<ProjectLanguage> series_languages(ProjectLanguage lang, const AnalyticsOptions& opt);

// Emission order for per-language rows: JavaScript, Python, Unknown.
int series_rank(ProjectLanguage lang);
// Order for raw totals rows: JavaScript, Python, Both, Unknown.
int variant_rank(ProjectLanguage lang);

struct YearLangStat {
    int year = 0;
    ProjectLanguage language = ProjectLanguage::Unknown;
    uint64_t vuln_commits = 0;
    uint64_t total_commits = 0;   // > 0 for every emitted stat
    double ratio_per_100k = 0.0;  // 100000 * vuln / total
};

CountMap vuln_counts(const std::vector<MitigationRecord>& records, const AnalyticsOptions& opt);
CountMap expand_totals(const CountMap& raw_totals, const AnalyticsOptions& opt);

// Pure arithmetic over already-counted inputs, so published per-year counts
// can be fed straight in. Pairs with zero totals are omitted.
std::vector<YearLangStat> ratio_per_100k(const CountMap& vuln, const CountMap& totals,
                                         const AnalyticsOptions& opt);

struct CweStat {
    CweId cwe;
    std::map<ProjectLanguage, uint64_t> count_per_language;  // (commit, CWE) pairs
};

struct OverlapSummary {
    std::set<CweId> shared;
    std::set<CweId> only_javascript;
    std::set<CweId> only_python;
};

struct CweDistribution {
    std::vector<CweStat> stats;  // CWE ascending
    OverlapSummary overlap;
};

CweDistribution cwe_distribution(const std::vector<MitigationRecord>& records,
                                 const AnalyticsOptions& opt);

// CWEs whose count reaches `threshold` in at least one language series.
std::set<CweId> top_cwes(const CweDistribution& distribution, uint64_t threshold);

// Signed floor of the day delta between commit and publish instant; one value
// per (commit, CVE) pair.
int64_t reaction_days(int64_t commit_date, int64_t publish_date);

struct ReactionStat {
    ProjectLanguage language = ProjectLanguage::Unknown;
    size_t n = 0;              // >= 1 for every emitted stat
    double mean_days = 0.0;    // arithmetic mean of signed per-pair deltas
    std::optional<double> mean_days_nonnegative;  // over the days >= 0 subset
};

struct YearReaction {
    int year = 0;
    ReactionStat stat;
};

struct CweReaction {
    CweId cwe;
    ReactionStat stat;
};

// Means over every (commit, CVE) pair with a resolved publish date, grouped
// by commit year. Deltas are integers, so the sums are exact and the result
// does not depend on record order.
std::vector<YearReaction> reaction_by_year(const std::vector<MitigationRecord>& records,
                                           const AnalyticsOptions& opt);

// Same pairs grouped by CWE; a pair contributes to every CWE of its CVE.
// Only CWEs in `keep` are reported.
std::vector<CweReaction> reaction_by_cwe(const std::vector<MitigationRecord>& records,
                                         const std::set<CweId>& keep,
                                         const AnalyticsOptions& opt);

}  // namespace vcm
