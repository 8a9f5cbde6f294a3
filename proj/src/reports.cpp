#include "vcm/reports.hpp"

#include "vcm/csv.hpp"
#include "vcm/store.hpp"
#include "vcm/time_util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <set>

namespace vcm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json cwe_numbers(const std::set<CweId>& cwes) {
    json out = json::array();
    for (const auto& cwe : cwes)
        out.push_back(cwe.number);
    return out;
}

uint64_t count_at(const CountMap& counts, int year, ProjectLanguage lang) {
    auto it = counts.find({year, lang});
    return it == counts.end() ? 0 : it->second;
}

}  // namespace

void write_records_file(const std::filesystem::path& file,
                        const std::vector<MitigationRecord>& records) {
    atomic_write(file, [&records](std::ostream& out) {
        out << kRecordsSchema.header_line() << '\n';
        for (const auto& record : records) {
            ordered_json line;
            line["commit"] = record.commit_id;
            line["repo"] = record.repo_id;
            line["language"] = language_name(record.language);
            line["date"] = format_utc(record.date);
            line["cwes"] = cwe_numbers(record.resolved.cwes);
            line["direct_cwes"] = cwe_numbers(record.resolved.direct_cwes);
            json resolved = json::array();
            for (const auto& [id, entry] : record.resolved.resolved) {
                (void)entry;
                resolved.push_back(id.to_string());
            }
            line["resolved_cves"] = std::move(resolved);
            json unresolved = json::array();
            for (const auto& id : record.resolved.unresolved)
                unresolved.push_back(id.to_string());
            line["unresolved_cves"] = std::move(unresolved);
            out << line.dump() << '\n';
        }
    });
}

RecordReadResult read_records_file(const std::filesystem::path& file, const NvdCache& cache) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + file.string());

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(file.string() + ": empty records file");
    auto header = parse_schema_header(line);
    if (!header || header->name != kRecordsSchema.name)
        throw std::runtime_error(file.string() + ": not a records table");
    if (header->version != kRecordsSchema.version)
        throw std::runtime_error(file.string() + ": unsupported records version " +
                                 std::to_string(header->version));

    RecordReadResult result;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string where = file.string() + ":" + std::to_string(line_no);
        json row;
        try {
            row = json::parse(line);
        } catch (const json::parse_error& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
        try {
            MitigationRecord record;
            record.commit_id = row.at("commit").get<std::string>();
            record.repo_id = row.at("repo").get<std::string>();
            auto language = language_from_name(row.at("language").get<std::string>());
            if (!language)
                throw std::runtime_error(where + ": unknown language");
            record.language = *language;
            auto date = parse_utc(row.at("date").get<std::string>());
            if (!date)
                throw std::runtime_error(where + ": bad date");
            record.date = *date;
            for (const auto& number : row.at("cwes")) {
                auto cwe = make_cwe(std::to_string(number.get<int>()));
                if (!cwe)
                    throw std::runtime_error(where + ": CWE number out of range");
                record.resolved.cwes.insert(*cwe);
            }
            for (const auto& number : row.at("direct_cwes")) {
                auto cwe = make_cwe(std::to_string(number.get<int>()));
                if (!cwe)
                    throw std::runtime_error(where + ": CWE number out of range");
                record.resolved.direct_cwes.insert(*cwe);
            }
            for (const auto& text : row.at("resolved_cves")) {
                auto id = parse_cve_text(text.get<std::string>());
                if (!id)
                    throw std::runtime_error(where + ": bad CVE id");
                if (const CveEntry* entry = cache.lookup(*id)) {
                    record.resolved.resolved.emplace_back(*id, *entry);
                } else {
                    record.resolved.unresolved.push_back(*id);
                    ++result.stale_cves;
                }
            }
            for (const auto& text : row.at("unresolved_cves")) {
                auto id = parse_cve_text(text.get<std::string>());
                if (!id)
                    throw std::runtime_error(where + ": bad CVE id");
                record.resolved.unresolved.push_back(*id);
            }
            std::sort(record.resolved.unresolved.begin(), record.resolved.unresolved.end());
            result.records.push_back(std::move(record));
        } catch (const json::exception& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
    }
    return result;
}

void write_totals_file(const std::filesystem::path& file, const CountMap& raw_totals) {
    atomic_write(file, [&raw_totals](std::ostream& out) {
        CsvWriter csv(out);
        csv.field("year").field("language").field("total_commits");
        csv.endrow();
        std::vector<std::pair<YearLangKey, uint64_t>> rows(raw_totals.begin(), raw_totals.end());
        std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
            if (a.first.first != b.first.first)
                return a.first.first < b.first.first;
            return variant_rank(a.first.second) < variant_rank(b.first.second);
        });
        for (const auto& [key, count] : rows) {
            csv.field(key.first).field(language_name(key.second)).field(count);
            csv.endrow();
        }
    });
}

CountMap read_totals_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line) || line != "year,language,total_commits")
        throw std::runtime_error(file.string() + ": not a totals table");

    CountMap totals;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::string where = file.string() + ":" + std::to_string(line_no);
        size_t c1 = line.find(',');
        size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos)
            throw std::runtime_error(where + ": expected three fields");
        try {
            int year = std::stoi(line.substr(0, c1));
            auto language = language_from_name(line.substr(c1 + 1, c2 - c1 - 1));
            if (!language)
                throw std::runtime_error(where + ": unknown language");
            uint64_t count = std::stoull(line.substr(c2 + 1));
            totals[{year, *language}] += count;
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(where + ": bad number");
        } catch (const std::out_of_range&) {
            throw std::runtime_error(where + ": number out of range");
        }
    }
    return totals;
}

void write_year_stats(std::ostream& out, const CountMap& vuln, const CountMap& totals,
                      const AnalyticsOptions& opt) {
    CsvWriter csv(out);
    csv.field("year").field("vuln_js").field("vuln_py").field("total_js").field("total_py");
    if (opt.include_unknown)
        csv.field("vuln_unknown").field("total_unknown");
    csv.endrow();

    std::set<int> years;
    for (const auto& [key, count] : totals) {
        (void)count;
        years.insert(key.first);
    }
    for (const auto& [key, count] : vuln) {
        (void)count;
        years.insert(key.first);
    }
    for (int year : years) {
        csv.field(year)
            .field(count_at(vuln, year, ProjectLanguage::JavaScript))
            .field(count_at(vuln, year, ProjectLanguage::Python))
            .field(count_at(totals, year, ProjectLanguage::JavaScript))
            .field(count_at(totals, year, ProjectLanguage::Python));
        if (opt.include_unknown)
            csv.field(count_at(vuln, year, ProjectLanguage::Unknown))
                .field(count_at(totals, year, ProjectLanguage::Unknown));
        csv.endrow();
    }
}

void write_ratio(std::ostream& out, const std::vector<YearLangStat>& stats) {
    CsvWriter csv(out);
    csv.field("year").field("language").field("vuln_commits").field("total_commits").field(
        "ratio_per_100k");
    csv.endrow();
    for (const auto& stat : stats) {
        csv.field(stat.year)
            .field(language_name(stat.language))
            .field(stat.vuln_commits)
            .field(stat.total_commits)
            .fixed3(stat.ratio_per_100k);
        csv.endrow();
    }
}

void write_cwe_counts(std::ostream& out, const CweDistribution& distribution,
                      const AnalyticsOptions& opt) {
    CsvWriter csv(out);
    csv.field("cwe").field("count_js").field("count_py");
    if (opt.include_unknown)
        csv.field("count_unknown");
    csv.endrow();
    for (const auto& stat : distribution.stats) {
        auto count_of = [&stat](ProjectLanguage lang) -> uint64_t {
            auto it = stat.count_per_language.find(lang);
            return it == stat.count_per_language.end() ? 0 : it->second;
        };
        csv.field(stat.cwe.number)
            .field(count_of(ProjectLanguage::JavaScript))
            .field(count_of(ProjectLanguage::Python));
        if (opt.include_unknown)
            csv.field(count_of(ProjectLanguage::Unknown));
        csv.endrow();
    }
}

namespace {

void write_reaction_row(CsvWriter& csv, const ReactionStat& stat) {
    csv.field(language_name(stat.language)).field(stat.n).fixed3(stat.mean_days);
    if (stat.mean_days_nonnegative)
        csv.fixed3(*stat.mean_days_nonnegative);
    else
        csv.empty();
    csv.endrow();
}

}  // namespace

void write_reaction_by_year(std::ostream& out, const std::vector<YearReaction>& stats) {
    CsvWriter csv(out);
    csv.field("year").field("language").field("n").field("mean_days").field(
        "mean_days_nonnegative");
    csv.endrow();
    for (const auto& row : stats) {
        csv.field(row.year);
        write_reaction_row(csv, row.stat);
    }
}

void write_reaction_by_cwe(std::ostream& out, const std::vector<CweReaction>& stats) {
    CsvWriter csv(out);
    csv.field("cwe").field("language").field("n").field("mean_days").field(
        "mean_days_nonnegative");
    csv.endrow();
    for (const auto& row : stats) {
        csv.field(row.cwe.number);
        write_reaction_row(csv, row.stat);
    }
}

void write_overlap(std::ostream& out, const OverlapSummary& overlap) {
    auto section = [](const std::set<CweId>& cwes) {
        ordered_json obj;
        obj["count"] = cwes.size();
        obj["cwes"] = cwe_numbers(cwes);
        return obj;
    };
    ordered_json doc;
    doc["shared"] = section(overlap.shared);
    doc["only_javascript"] = section(overlap.only_javascript);
    doc["only_python"] = section(overlap.only_python);
    out << doc.dump(2) << '\n';
}

}  // namespace vcm
