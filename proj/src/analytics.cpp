#include "vcm/analytics.hpp"

#include "vcm/refs.hpp"
#include "vcm/time_util.hpp"

#include <algorithm>

namespace vcm {

namespace {

struct MeanAcc {
    int64_t sum = 0;
    size_t n = 0;
    int64_t nonneg_sum = 0;
    size_t nonneg_n = 0;

    void add(int64_t days) {
        sum += days;
        ++n;
        if (days >= 0) {
            nonneg_sum += days;
            ++nonneg_n;
        }
    }

    ReactionStat finish(ProjectLanguage lang) const {
        ReactionStat stat;
        stat.language = lang;
        stat.n = n;
        stat.mean_days = static_cast<double>(sum) / static_cast<double>(n);
        if (nonneg_n > 0)
            stat.mean_days_nonnegative =
                static_cast<double>(nonneg_sum) / static_cast<double>(nonneg_n);
        return stat;
    }
};

bool year_in_range(int year, const AnalyticsOptions& opt) {
    if (opt.year_min && year < *opt.year_min)
        return false;
    if (opt.year_max && year > *opt.year_max)
        return false;
    return true;
}

}  // namespace

void RecordBuilder::add(const CommitRecord& commit) {
    if (global_dedup_ && !seen_.insert(commit.commit_id).second) {
        ++stats_.duplicates;
        return;
    }
    ++stats_.commits;

    const ProjectLanguage language = classify_language(commit.root_entries);
    const int64_t date = commit_date(commit, date_field_);
    ++totals_[{utc_year(date), language}];

    ExtractionReport report = classify_message(commit.message);
    if (report.false_positive)
        ++stats_.false_positives;
    if (report.refs.empty())
        return;

    MitigationRecord record;
    record.commit_id = commit.commit_id;
    record.repo_id = commit.repo_id;
    record.language = language;
    record.date = date;
    static const NvdCache kEmptyCache;
    record.resolved = resolve_refs(report.refs, cache_ ? *cache_ : kEmptyCache);
    records_.push_back(std::move(record));
    ++stats_.records;
}

std::vector<ProjectLanguage> series_languages(ProjectLanguage lang, const AnalyticsOptions& opt) {
    switch (lang) {
    case ProjectLanguage::Python:
    case ProjectLanguage::JavaScript:
        return {lang};
    case ProjectLanguage::Both:
        if (opt.include_both)
            return {ProjectLanguage::JavaScript, ProjectLanguage::Python};
        return {};
    case ProjectLanguage::Unknown:
        if (opt.include_unknown)
            return {ProjectLanguage::Unknown};
        return {};
    }
    return {};
}

int series_rank(ProjectLanguage lang) {
    switch (lang) {
    case ProjectLanguage::JavaScript:
        return 0;
    case ProjectLanguage::Python:
        return 1;
    case ProjectLanguage::Unknown:
        return 2;
    case ProjectLanguage::Both:
        return 3;  // never a series of its own
    }
    return 3;
}

int variant_rank(ProjectLanguage lang) {
    switch (lang) {
    case ProjectLanguage::JavaScript:
        return 0;
    case ProjectLanguage::Python:
        return 1;
    case ProjectLanguage::Both:
        return 2;
    case ProjectLanguage::Unknown:
        return 3;
    }
    return 3;
}

CountMap vuln_counts(const std::vector<MitigationRecord>& records, const AnalyticsOptions& opt) {
    CountMap counts;
    for (const auto& record : records) {
        int year = utc_year(record.date);
        if (!year_in_range(year, opt))
            continue;
        for (auto lang : series_languages(record.language, opt))
            ++counts[{year, lang}];
    }
    return counts;
}

CountMap expand_totals(const CountMap& raw_totals, const AnalyticsOptions& opt) {
    CountMap expanded;
    for (const auto& [key, count] : raw_totals) {
        if (!year_in_range(key.first, opt))
            continue;
        for (auto lang : series_languages(key.second, opt))
            expanded[{key.first, lang}] += count;
    }
    return expanded;
}

std::vector<YearLangStat> ratio_per_100k(const CountMap& vuln, const CountMap& totals,
                                         const AnalyticsOptions& opt) {
    std::vector<YearLangStat> out;
    for (const auto& [key, total] : totals) {
        if (total == 0 || !year_in_range(key.first, opt))
            continue;
        YearLangStat stat;
        stat.year = key.first;
        stat.language = key.second;
        stat.total_commits = total;
        auto it = vuln.find(key);
        stat.vuln_commits = it == vuln.end() ? 0 : it->second;
        stat.ratio_per_100k =
            100000.0 * static_cast<double>(stat.vuln_commits) / static_cast<double>(total);
        out.push_back(stat);
    }
    std::sort(out.begin(), out.end(), [](const YearLangStat& a, const YearLangStat& b) {
        if (a.year != b.year)
            return a.year < b.year;
        return series_rank(a.language) < series_rank(b.language);
    });
    return out;
}

CweDistribution cwe_distribution(const std::vector<MitigationRecord>& records,
                                 const AnalyticsOptions& opt) {
    CweDistribution out;
    std::map<CweId, std::map<ProjectLanguage, uint64_t>> counts;
    for (const auto& record : records) {
        if (!year_in_range(utc_year(record.date), opt))
            continue;
        auto langs = series_languages(record.language, opt);
        if (langs.empty())
            continue;
        for (const auto& cwe : record.resolved.cwes) {  // one hit per (commit, CWE) pair
            for (auto lang : langs)
                ++counts[cwe][lang];
        }
    }
    for (auto& [cwe, per_language] : counts) {
        bool in_js = per_language.count(ProjectLanguage::JavaScript) > 0;
        bool in_py = per_language.count(ProjectLanguage::Python) > 0;
        if (in_js && in_py)
            out.overlap.shared.insert(cwe);
        else if (in_js)
            out.overlap.only_javascript.insert(cwe);
        else if (in_py)
            out.overlap.only_python.insert(cwe);
        out.stats.push_back(CweStat{cwe, std::move(per_language)});
    }
    return out;
}

std::set<CweId> top_cwes(const CweDistribution& distribution, uint64_t threshold) {
    std::set<CweId> out;
    for (const auto& stat : distribution.stats) {
        for (const auto& [lang, count] : stat.count_per_language) {
            if (count >= threshold) {
                out.insert(stat.cwe);
                break;
            }
        }
    }
    return out;
}

int64_t reaction_days(int64_t commit_date, int64_t publish_date) {
    return floor_days(commit_date - publish_date);
}

std::vector<YearReaction> reaction_by_year(const std::vector<MitigationRecord>& records,
                                           const AnalyticsOptions& opt) {
    std::map<std::pair<int, int>, MeanAcc> groups;  // (year, series rank)
    std::map<int, ProjectLanguage> rank_to_lang;
    for (const auto& record : records) {
        int year = utc_year(record.date);
        if (!year_in_range(year, opt))
            continue;
        auto langs = series_languages(record.language, opt);
        if (langs.empty())
            continue;
        for (const auto& [cve, entry] : record.resolved.resolved) {
            (void)cve;
            int64_t days = reaction_days(record.date, entry.published);
            for (auto lang : langs) {
                groups[{year, series_rank(lang)}].add(days);
                rank_to_lang[series_rank(lang)] = lang;
            }
        }
    }
    std::vector<YearReaction> out;
    for (const auto& [key, acc] : groups)
        out.push_back(YearReaction{key.first, acc.finish(rank_to_lang[key.second])});
    return out;
}

std::vector<CweReaction> reaction_by_cwe(const std::vector<MitigationRecord>& records,
                                         const std::set<CweId>& keep,
                                         const AnalyticsOptions& opt) {
    std::map<std::pair<CweId, int>, MeanAcc> groups;
    std::map<int, ProjectLanguage> rank_to_lang;
    for (const auto& record : records) {
        if (!year_in_range(utc_year(record.date), opt))
            continue;
        auto langs = series_languages(record.language, opt);
        if (langs.empty())
            continue;
        for (const auto& [cve, entry] : record.resolved.resolved) {
            (void)cve;
            int64_t days = reaction_days(record.date, entry.published);
            for (const auto& cwe : entry.cwes) {
                if (!keep.contains(cwe))
                    continue;
                for (auto lang : langs) {
                    groups[{cwe, series_rank(lang)}].add(days);
                    rank_to_lang[series_rank(lang)] = lang;
                }
            }
        }
    }
    std::vector<CweReaction> out;
    for (const auto& [key, acc] : groups)
        out.push_back(CweReaction{key.first, acc.finish(rank_to_lang[key.second])});
    return out;
}

}  // namespace vcm
