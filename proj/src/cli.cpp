#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "vcm/cli.hpp"

#include "vcm/analytics.hpp"
#include "vcm/ingest.hpp"
#include "vcm/nvd.hpp"
#include "vcm/reports.hpp"
#include "vcm/store.hpp"
#include "vcm/time_util.hpp"

#include <CLI11.hpp>
#include <httplib.h>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <sstream>
#include <thread>

namespace vcm::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitInput = 3;
constexpr int kExitNetwork = 4;

struct RunConfig {
    std::vector<std::string> repos;
    std::vector<std::string> exports;
    std::string out = "out";
    std::string nvd_dir;
    std::string nvd_cache;
    std::string feed_pattern = "*.json*";
    std::string date_field = "committer";
    std::string branches = "all";
    std::string since;
    std::string until;
    uint64_t threshold = 150;
    bool include_both = true;
    bool include_unknown = false;
    bool global_dedup = false;
    unsigned threads = 1;
    std::string base_url = "https://nvd.nist.gov/feeds/json/cve/1.1/";
    std::string records_file;  // defaults to <out>/records.ndjson
    std::string totals_file;
    std::string quiet;  // unused placeholder keeps CLI11 bindings uniform
};

// ---------------------------------------------------------------- config

// key=value lines, '#' comments, optional quotes around the value. repo=
// and export= may repeat.
bool load_config_file(const std::string& path, RunConfig& cfg, std::string& error) {
    std::ifstream in(path);
    if (!in) {
        error = "cannot open config file: " + path;
        return false;
    }
    auto trim = [](std::string s) {
        size_t b = s.find_first_not_of(" \t\r");
        size_t e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto parse_bool = [](const std::string& v, bool& out) {
        if (v == "true" || v == "1" || v == "yes" || v == "on") {
            out = true;
            return true;
        }
        if (v == "false" || v == "0" || v == "no" || v == "off") {
            out = false;
            return true;
        }
        return false;
    };

    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string text = trim(line);
        if (text.empty() || text[0] == '#')
            continue;
        size_t eq = text.find('=');
        if (eq == std::string::npos) {
            error = path + ":" + std::to_string(line_no) + ": expected key=value";
            return false;
        }
        std::string key = trim(text.substr(0, eq));
        std::string value = trim(text.substr(eq + 1));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
            value = value.substr(1, value.size() - 2);

        bool ok = true;
        if (key == "repo")
            cfg.repos.push_back(value);
        else if (key == "export")
            cfg.exports.push_back(value);
        else if (key == "out")
            cfg.out = value;
        else if (key == "nvd-dir")
            cfg.nvd_dir = value;
        else if (key == "nvd-cache")
            cfg.nvd_cache = value;
        else if (key == "feed-pattern")
            cfg.feed_pattern = value;
        else if (key == "date-field")
            cfg.date_field = value;
        else if (key == "branches")
            cfg.branches = value;
        else if (key == "since")
            cfg.since = value;
        else if (key == "until")
            cfg.until = value;
        else if (key == "base-url")
            cfg.base_url = value;
        else if (key == "records")
            cfg.records_file = value;
        else if (key == "totals")
            cfg.totals_file = value;
        else if (key == "threshold")
            ok = (std::istringstream(value) >> cfg.threshold).eof();
        else if (key == "threads")
            ok = (std::istringstream(value) >> cfg.threads).eof();
        else if (key == "include-both")
            ok = parse_bool(value, cfg.include_both);
        else if (key == "include-unknown")
            ok = parse_bool(value, cfg.include_unknown);
        else if (key == "global-dedup")
            ok = parse_bool(value, cfg.global_dedup);
        else {
            error = path + ":" + std::to_string(line_no) + ": unknown key \"" + key + "\"";
            return false;
        }
        if (!ok) {
            error = path + ":" + std::to_string(line_no) + ": bad value for \"" + key + "\"";
            return false;
        }
    }
    return true;
}

bool apply_env(RunConfig& cfg, std::string& error) {
    if (const char* v = std::getenv("VCM_NVD_DIR"); v && *v)
        cfg.nvd_dir = v;
    if (const char* v = std::getenv("VCM_OUT"); v && *v)
        cfg.out = v;
    if (const char* v = std::getenv("VCM_THREADS"); v && *v) {
        std::istringstream in(v);
        if (!((in >> cfg.threads).eof())) {
            error = "VCM_THREADS is not a number";
            return false;
        }
    }
    return true;
}

// ------------------------------------------------------------- settings

struct Settings {
    ScanConfig scan;
    AnalyticsOptions analytics;
    uint64_t threshold = 150;
    bool global_dedup = false;
    unsigned threads = 1;
};

std::optional<int64_t> parse_bound(const std::string& text, bool is_until, std::string& error) {
    if (text.empty())
        return std::nullopt;
    if (text.size() == 4 &&
        std::all_of(text.begin(), text.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        int year = std::stoi(text);
        if (is_until)
            return days_from_civil(year, 12, 31) * 86400 + 86399;
        return days_from_civil(year, 1, 1) * 86400;
    }
    if (auto t = parse_utc(text)) {
        // bare dates are read as whole days
        if (is_until && text.size() == 10)
            return *t + 86399;
        return *t;
    }
    error = "cannot parse date \"" + text + "\" (want YYYY, YYYY-MM-DD or RFC 3339)";
    return std::nullopt;
}

bool build_settings(const RunConfig& cfg, Settings& out, std::string& error) {
    if (cfg.date_field == "author")
        out.scan.date_field = DateField::Author;
    else if (cfg.date_field == "committer")
        out.scan.date_field = DateField::Committer;
    else {
        error = "--date-field must be author or committer";
        return false;
    }
    if (cfg.branches == "all")
        out.scan.branches = BranchPolicy::AllRefs;
    else if (cfg.branches == "default")
        out.scan.branches = BranchPolicy::DefaultBranch;
    else {
        error = "--branches must be all or default";
        return false;
    }
    if (!cfg.since.empty()) {
        out.scan.since = parse_bound(cfg.since, false, error);
        if (!out.scan.since)
            return false;
    }
    if (!cfg.until.empty()) {
        out.scan.until = parse_bound(cfg.until, true, error);
        if (!out.scan.until)
            return false;
    }
    if (out.scan.since && out.scan.until && *out.scan.since > *out.scan.until) {
        error = "--since is after --until";
        return false;
    }
    if (cfg.threshold < 1) {
        error = "--threshold must be at least 1";
        return false;
    }
    out.threshold = cfg.threshold;
    out.analytics.include_both = cfg.include_both;
    out.analytics.include_unknown = cfg.include_unknown;
    if (out.scan.since)
        out.analytics.year_min = utc_year(*out.scan.since);
    if (out.scan.until)
        out.analytics.year_max = utc_year(*out.scan.until);
    out.global_dedup = cfg.global_dedup;
    out.threads = cfg.threads == 0 ? 1 : cfg.threads;
    return true;
}

// ----------------------------------------------------------------- misc

std::string repo_label(const std::string& path) {
    std::string trimmed = path;
    while (trimmed.size() > 1 && trimmed.back() == '/')
        trimmed.pop_back();
    auto name = fs::path(trimmed).filename().string();
    return name.empty() ? trimmed : name;
}

std::regex glob_to_regex(const std::string& pattern) {
    std::string re;
    for (char c : pattern) {
        switch (c) {
        case '*':
            re += ".*";
            break;
        case '?':
            re += '.';
            break;
        default:
            if (std::isalnum(static_cast<unsigned char>(c)))
                re += c;
            else {
                re += '\\';
                re += c;
            }
        }
    }
    return std::regex(re);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

// ------------------------------------------------------------- commands

struct PipelineOutput {
    std::vector<MitigationRecord> records;
    CountMap totals;
    BuildStats stats;
    size_t inputs = 0;
    size_t failed = 0;
};

void merge_builder(PipelineOutput& into, RecordBuilder&& builder) {
    auto records = builder.take_records();
    into.records.insert(into.records.end(), std::make_move_iterator(records.begin()),
                        std::make_move_iterator(records.end()));
    for (const auto& [key, count] : builder.totals())
        into.totals[key] += count;
    into.stats.commits += builder.stats().commits;
    into.stats.records += builder.stats().records;
    into.stats.false_positives += builder.stats().false_positives;
    into.stats.duplicates += builder.stats().duplicates;
}

void read_exports(const RunConfig& cfg, const Settings& settings, RecordBuilder& builder,
                  PipelineOutput& output) {
    for (const auto& file : cfg.exports) {
        std::ifstream in(file, std::ios::binary);
        if (!in) {
            std::cerr << "warning: cannot open export file: " << file << "\n";
            ++output.failed;
            continue;
        }
        try {
            auto report = read_export(in, [&](CommitRecord&& c) {
                int64_t date = commit_date(c, settings.scan.date_field);
                if ((settings.scan.since && date < *settings.scan.since) ||
                    (settings.scan.until && date > *settings.scan.until))
                    return;
                builder.add(c);
            });
            if (report.skipped > 0)
                std::cerr << "warning: " << file << ": skipped " << report.skipped
                          << " malformed line(s)\n";
        } catch (const std::exception& e) {
            std::cerr << "warning: " << file << ": " << e.what() << "\n";
            ++output.failed;
        }
    }
}

// Scans the configured repositories (optionally in parallel, merged back in
// input order) and reads export files; every commit flows through one
// classification pipeline.
PipelineOutput run_pipeline(const RunConfig& cfg, const Settings& settings,
                            const NvdCache& cache) {
    PipelineOutput output;
    output.inputs = cfg.repos.size() + cfg.exports.size();

    struct RepoSlot {
        RecordBuilder builder;
        std::string error;
        ScanReport report;
    };

    // Global dedup needs one shared builder, so it runs single-threaded.
    unsigned threads = settings.global_dedup ? 1 : settings.threads;
    threads = std::min<unsigned>(threads, std::max<size_t>(cfg.repos.size(), 1));

    if (settings.global_dedup) {
        RecordBuilder builder(settings.scan.date_field, &cache, true);
        for (const auto& repo : cfg.repos) {
            try {
                scan_repository(repo, repo_label(repo), settings.scan,
                                [&builder](CommitRecord&& c) { builder.add(c); });
            } catch (const std::exception& e) {
                std::cerr << "warning: " << e.what() << "\n";
                ++output.failed;
            }
        }
        read_exports(cfg, settings, builder, output);
        merge_builder(output, std::move(builder));
        return output;
    }

    std::vector<RepoSlot> slots;
    slots.reserve(cfg.repos.size());
    for (size_t i = 0; i < cfg.repos.size(); ++i)
        slots.push_back(RepoSlot{RecordBuilder(settings.scan.date_field, &cache, false), "", {}});

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t i = next.fetch_add(1);
            if (i >= cfg.repos.size())
                return;
            try {
                slots[i].report = scan_repository(
                    cfg.repos[i], repo_label(cfg.repos[i]), settings.scan,
                    [&slots, i](CommitRecord&& c) { slots[i].builder.add(c); });
            } catch (const std::exception& e) {
                slots[i].error = e.what();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    for (auto& slot : slots) {
        if (!slot.error.empty()) {
            std::cerr << "warning: " << slot.error << "\n";
            ++output.failed;
            continue;
        }
        merge_builder(output, std::move(slot.builder));
    }

    RecordBuilder export_builder(settings.scan.date_field, &cache, false);
    read_exports(cfg, settings, export_builder, output);
    merge_builder(output, std::move(export_builder));
    return output;
}

// Builds (or loads) the CVE lookup cache and persists it beside the other
// intermediates.
int prepare_cache(const RunConfig& cfg, NvdCache& cache) {
    if (!cfg.nvd_cache.empty()) {
        try {
            cache = NvdCache::load(cfg.nvd_cache);
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return kExitInput;
        }
        return kExitOk;
    }
    if (!cfg.nvd_dir.empty()) {
        std::error_code ec;
        fs::directory_iterator dir(cfg.nvd_dir, ec);
        if (ec) {
            std::cerr << "error: cannot read feed directory " << cfg.nvd_dir << ": "
                      << ec.message() << "\n";
            return kExitInput;
        }
        std::regex pattern = glob_to_regex(cfg.feed_pattern);
        std::vector<fs::path> feeds;
        for (const auto& entry : dir) {
            if (entry.is_regular_file() &&
                std::regex_match(entry.path().filename().string(), pattern))
                feeds.push_back(entry.path());
        }
        std::sort(feeds.begin(), feeds.end());
        if (feeds.empty())
            std::cerr << "warning: no feed files matching \"" << cfg.feed_pattern << "\" in "
                      << cfg.nvd_dir << "\n";
        for (const auto& feed : feeds) {
            try {
                auto report = cache.ingest_file(feed);
                std::cout << "ingested " << feed.filename().string() << ": " << report.parsed
                          << " entries";
                if (report.skipped() > 0)
                    std::cout << ", " << report.skipped() << " skipped";
                std::cout << "\n";
            } catch (const std::exception& e) {
                std::cerr << "warning: " << feed.string() << ": " << e.what() << "\n";
            }
        }
        return kExitOk;
    }
    std::cerr << "warning: no NVD cache or feed directory given; "
                 "CVE references will stay unresolved\n";
    return kExitOk;
}

int cmd_scan(const RunConfig& cfg, const Settings& settings) {
    if (cfg.repos.empty() && cfg.exports.empty()) {
        std::cerr << "error: no inputs; give at least one --repo or --export\n";
        return kExitConfig;
    }
    fs::create_directories(cfg.out);

    NvdCache cache;
    if (int rc = prepare_cache(cfg, cache); rc != kExitOk)
        return rc;
    fs::path cache_file = fs::path(cfg.out) / "nvd-cache.ndjson";
    cache.save(cache_file);

    PipelineOutput output = run_pipeline(cfg, settings, cache);
    if (output.inputs > 0 && output.failed == output.inputs) {
        std::cerr << "error: every input failed\n";
        return kExitInput;
    }

    fs::path records_file = fs::path(cfg.out) / "records.ndjson";
    fs::path totals_file = fs::path(cfg.out) / "totals.csv";
    write_records_file(records_file, output.records);
    write_totals_file(totals_file, output.totals);

    std::cout << "scanned " << (output.inputs - output.failed) << "/" << output.inputs
              << " inputs: " << output.stats.commits << " commits, " << output.stats.records
              << " mitigation records, " << output.stats.false_positives
              << " filter false positives";
    if (output.stats.duplicates > 0)
        std::cout << ", " << output.stats.duplicates << " duplicates dropped";
    std::cout << "\n";
    std::cout << "wrote " << records_file.string() << "\n";
    std::cout << "wrote " << totals_file.string() << "\n";
    std::cout << "wrote " << cache_file.string() << " (" << cache.size() << " entries)\n";
    if (output.failed > 0)
        std::cout << output.failed << " input(s) failed, see warnings above\n";
    return kExitOk;
}

int cmd_analyze(const RunConfig& cfg, const Settings& settings) {
    fs::path records_file =
        cfg.records_file.empty() ? fs::path(cfg.out) / "records.ndjson" : fs::path(cfg.records_file);
    fs::path totals_file =
        cfg.totals_file.empty() ? fs::path(cfg.out) / "totals.csv" : fs::path(cfg.totals_file);
    fs::path cache_file =
        cfg.nvd_cache.empty() ? fs::path(cfg.out) / "nvd-cache.ndjson" : fs::path(cfg.nvd_cache);

    for (const auto& file : {records_file, totals_file, cache_file}) {
        if (!fs::exists(file)) {
            std::cerr << "error: missing input file: " << file.string() << "\n";
            return kExitInput;
        }
    }

    NvdCache cache;
    RecordReadResult read;
    CountMap raw_totals;
    try {
        cache = NvdCache::load(cache_file);
        read = read_records_file(records_file, cache);
        raw_totals = read_totals_file(totals_file);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    if (read.stale_cves > 0)
        std::cerr << "warning: " << read.stale_cves
                  << " resolved CVE reference(s) no longer present in the cache\n";

    const AnalyticsOptions& opt = settings.analytics;
    CountMap vuln = vuln_counts(read.records, opt);
    CountMap totals = expand_totals(raw_totals, opt);
    auto ratios = ratio_per_100k(vuln, totals, opt);
    auto distribution = cwe_distribution(read.records, opt);
    auto top = top_cwes(distribution, settings.threshold);
    auto by_year = reaction_by_year(read.records, opt);
    auto by_cwe = reaction_by_cwe(read.records, top, opt);

    fs::path out_dir(cfg.out);
    fs::create_directories(out_dir);
    atomic_write(out_dir / "year_stats.csv",
                 [&](std::ostream& o) { write_year_stats(o, vuln, totals, opt); });
    atomic_write(out_dir / "ratio.csv", [&](std::ostream& o) { write_ratio(o, ratios); });
    atomic_write(out_dir / "cwe_counts.csv",
                 [&](std::ostream& o) { write_cwe_counts(o, distribution, opt); });
    atomic_write(out_dir / "reaction_by_year.csv",
                 [&](std::ostream& o) { write_reaction_by_year(o, by_year); });
    atomic_write(out_dir / "reaction_by_cwe.csv",
                 [&](std::ostream& o) { write_reaction_by_cwe(o, by_cwe); });
    atomic_write(out_dir / "overlap.json",
                 [&](std::ostream& o) { write_overlap(o, distribution.overlap); });

    for (const char* name : {"year_stats.csv", "ratio.csv", "cwe_counts.csv",
                             "reaction_by_year.csv", "reaction_by_cwe.csv", "overlap.json"})
        std::cout << "wrote " << (out_dir / name).string() << "\n";
    std::cout << read.records.size() << " records, " << distribution.stats.size()
              << " CWE categories, " << top.size() << " above threshold " << settings.threshold
              << "\n";
    return kExitOk;
}

int cmd_fetch_nvd(const RunConfig& cfg, const Settings& settings) {
    if (cfg.nvd_dir.empty()) {
        std::cerr << "error: --nvd-dir (or VCM_NVD_DIR) is required for fetch-nvd\n";
        return kExitConfig;
    }
    fs::create_directories(cfg.nvd_dir);

    // https://host[:port]/path/ → origin + path prefix
    std::string origin, prefix;
    size_t scheme = cfg.base_url.find("://");
    if (scheme == std::string::npos) {
        std::cerr << "error: bad --base-url: " << cfg.base_url << "\n";
        return kExitConfig;
    }
    size_t slash = cfg.base_url.find('/', scheme + 3);
    if (slash == std::string::npos) {
        origin = cfg.base_url;
        prefix = "/";
    } else {
        origin = cfg.base_url.substr(0, slash);
        prefix = cfg.base_url.substr(slash);
    }
    if (prefix.back() != '/')
        prefix += '/';

    int year_from = settings.analytics.year_min.value_or(2002);
    int year_to = settings.analytics.year_max.value_or(utc_year(::time(nullptr)));
    if (year_from > year_to) {
        std::cerr << "error: year range is empty\n";
        return kExitConfig;
    }

    fs::path log_file = fs::path(cfg.nvd_dir) / "feeds.sha256";
    std::map<std::string, std::string> checksums;
    if (fs::exists(log_file)) {
        std::ifstream in(log_file);
        std::string line;
        while (std::getline(in, line)) {
            size_t sp = line.find("  ");
            if (sp != std::string::npos)
                checksums[line.substr(sp + 2)] = line.substr(0, sp);
        }
    }
    auto save_log = [&]() {
        atomic_write(log_file, [&](std::ostream& o) {
            for (const auto& [name, hex] : checksums)
                o << hex << "  " << name << '\n';
        });
    };

    httplib::Client client(origin);
    client.set_connection_timeout(15, 0);
    client.set_read_timeout(120, 0);
    client.set_follow_location(true);

    size_t downloaded = 0, skipped = 0;
    for (int year = year_from; year <= year_to; ++year) {
        std::string name = "nvdcve-1.1-" + std::to_string(year) + ".json.gz";
        fs::path target = fs::path(cfg.nvd_dir) / name;
        if (fs::exists(target)) {
            std::string hex = sha256_hex(read_file(target));
            auto it = checksums.find(name);
            if (it == checksums.end()) {
                // pre-placed feed: trust it and record its checksum
                checksums[name] = hex;
                ++skipped;
                continue;
            }
            if (it->second == hex) {
                ++skipped;
                continue;
            }
            std::cerr << "warning: checksum mismatch for " << name << ", re-downloading\n";
        }
        auto res = client.Get(prefix + name);
        if (!res || res->status != 200) {
            save_log();
            std::cerr << "error: fetching " << origin << prefix << name << " failed ("
                      << (res ? std::to_string(res->status) : "no response") << ")\n";
            return kExitNetwork;
        }
        atomic_write(target, [&](std::ostream& o) { o.write(res->body.data(),
                                                            static_cast<std::streamsize>(res->body.size())); });
        checksums[name] = sha256_hex(res->body);
        std::cout << "fetched " << name << " (" << res->body.size() << " bytes)\n";
        ++downloaded;
    }
    save_log();
    std::cout << "feeds: " << downloaded << " downloaded, " << skipped << " up to date\n";
    return kExitOk;
}

int cmd_report(RunConfig cfg, const Settings& settings) {
    if (int rc = cmd_scan(cfg, settings); rc != kExitOk)
        return rc;
    cfg.records_file.clear();  // analyze reads what scan just wrote
    cfg.totals_file.clear();
    cfg.nvd_cache.clear();
    return cmd_analyze(cfg, settings);
}

}  // namespace

int run(const std::vector<std::string>& args) {
    RunConfig cfg;

    // Layering: defaults < config file < environment < flags.
    for (size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            std::string error;
            if (!load_config_file(args[i + 1], cfg, error)) {
                std::cerr << "error: " << error << "\n";
                return kExitConfig;
            }
            break;
        }
    }
    {
        std::string error;
        if (!apply_env(cfg, error)) {
            std::cerr << "error: " << error << "\n";
            return kExitConfig;
        }
    }

    CLI::App app{"mine vulnerability mitigation commits and their CWE analytics"};
    app.set_version_flag("--version", "vcm 0.1.0");
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file");
    app.add_option("--out", cfg.out, "output directory");
    app.add_option("--date-field", cfg.date_field, "author|committer");
    app.add_option("--branches", cfg.branches, "all|default");
    app.add_option("--since", cfg.since, "lower date bound (YYYY, YYYY-MM-DD or RFC 3339)");
    app.add_option("--until", cfg.until, "upper date bound, inclusive");
    app.add_option("--threshold", cfg.threshold, "top-CWE reference threshold");
    app.add_flag("--include-both,!--no-include-both", cfg.include_both,
                 "count Both-language commits in both series");
    app.add_flag("--include-unknown", cfg.include_unknown,
                 "carry Unknown-language commits as a third series");
    app.add_flag("--global-dedup", cfg.global_dedup,
                 "drop commits already seen in another repository");
    app.add_option("--threads", cfg.threads, "parallel repository scans");
    app.add_option("--nvd-dir", cfg.nvd_dir, "directory of NVD JSON feed files");
    app.add_option("--nvd-cache", cfg.nvd_cache, "existing nvd-cache.ndjson to use");
    app.add_option("--feed-pattern", cfg.feed_pattern, "feed file name glob");
    app.add_option("--base-url", cfg.base_url, "NVD feed base URL");
    app.add_option("--records", cfg.records_file, "records.ndjson path (analyze)");
    app.add_option("--totals", cfg.totals_file, "totals.csv path (analyze)");

    auto* scan = app.add_subcommand("scan", "scan inputs into records.ndjson + totals.csv");
    scan->add_option("--repo", cfg.repos, "git repository path (repeatable)");
    scan->add_option("--export", cfg.exports, "commit export NDJSON file (repeatable)");
    auto* analyze =
        app.add_subcommand("analyze", "compute report files from scan output");
    auto* fetch = app.add_subcommand("fetch-nvd", "download yearly NVD feeds");
    auto* report = app.add_subcommand("report", "scan + analyze in one step");
    report->add_option("--repo", cfg.repos, "git repository path (repeatable)");
    report->add_option("--export", cfg.exports, "commit export NDJSON file (repeatable)");

    for (auto* sub : {scan, analyze, fetch, report})
        sub->fallthrough();
    app.require_subcommand(1);

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion& e) {
        std::cout << e.what() << "\n";
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.get_name() << " --help for usage\n";
        return kExitConfig;
    }

    Settings settings;
    {
        std::string error;
        if (!build_settings(cfg, settings, error)) {
            std::cerr << "error: " << error << "\n";
            return kExitConfig;
        }
    }

    try {
        if (scan->parsed())
            return cmd_scan(cfg, settings);
        if (analyze->parsed())
            return cmd_analyze(cfg, settings);
        if (fetch->parsed())
            return cmd_fetch_nvd(cfg, settings);
        if (report->parsed())
            return cmd_report(cfg, settings);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitConfig;
}

}  // namespace vcm::cli
