#include "vcm/nvd.hpp"

#include "vcm/store.hpp"
#include "vcm/time_util.hpp"

#include <nlohmann/json.hpp>
#include <zlib.h>

#include <algorithm>
#include <cctype>
#include <ctime>
#include <fstream>
#include <set>

namespace vcm {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string upper(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

// "CWE-79" (nothing more, nothing less) → CweId. NVD also emits values such
// as "NVD-CWE-noinfo" and "NVD-CWE-Other"; those carry no category.
std::optional<CweId> cwe_from_problemtype(std::string_view value) {
    if (value.size() < 5 || value.substr(0, 4) != "CWE-")
        return std::nullopt;
    return make_cwe(value.substr(4));
}

const json* find(const json& obj, const char* key) {
    if (!obj.is_object())
        return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

// One CVE_Items element → CveEntry. Returns nullopt after bumping the
// matching skip counter.
std::optional<CveEntry> parse_item(const json& item, FeedParseReport& report) {
    CveEntry entry;

    const json* cve = find(item, "cve");
    const json* meta = cve ? find(*cve, "CVE_data_meta") : nullptr;
    const json* id = meta ? find(*meta, "ID") : nullptr;
    std::optional<CveId> parsed_id;
    if (id && id->is_string())
        parsed_id = parse_cve_text(id->get<std::string>());
    if (!parsed_id) {
        ++report.skipped_missing_id;
        return std::nullopt;
    }
    entry.id = *parsed_id;

    const json* published = find(item, "publishedDate");
    std::optional<int64_t> when;
    if (published && published->is_string())
        when = parse_utc(published->get<std::string>());
    if (!when) {
        ++report.skipped_missing_date;
        return std::nullopt;
    }
    entry.published = *when;

    std::set<CweId> cwes;
    if (const json* problemtype = cve ? find(*cve, "problemtype") : nullptr) {
        if (const json* data = find(*problemtype, "problemtype_data"); data && data->is_array()) {
            for (const auto& group : *data) {
                const json* descriptions = find(group, "description");
                if (!descriptions || !descriptions->is_array())
                    continue;
                for (const auto& description : *descriptions) {
                    const json* value = find(description, "value");
                    if (value && value->is_string()) {
                        if (auto cwe = cwe_from_problemtype(value->get<std::string>()))
                            cwes.insert(*cwe);
                    }
                }
            }
        }
    }
    entry.cwes.assign(cwes.begin(), cwes.end());

    // v3 preferred over v2; severity and impact always come from the same block.
    if (const json* impact = find(item, "impact")) {
        const json* block = nullptr;
        const json* severity = nullptr;
        if ((block = find(*impact, "baseMetricV3")) != nullptr) {
            if (const json* cvss = find(*block, "cvssV3"))
                severity = find(*cvss, "baseSeverity");
        } else if ((block = find(*impact, "baseMetricV2")) != nullptr) {
            severity = find(*block, "severity");
        }
        if (block) {
            if (severity && severity->is_string())
                entry.severity = severity_from_name(severity->get<std::string>());
            if (const json* score = find(*block, "impactScore"); score && score->is_number()) {
                double value = score->get<double>();
                if (value >= 0.0 && value <= 10.0)
                    entry.impact = value;
                else
                    ++report.scores_out_of_range;
            }
        }
    }

    return entry;
}

}  // namespace

std::string_view severity_name(Severity severity) {
    switch (severity) {
    case Severity::Low:
        return "LOW";
    case Severity::Medium:
        return "MEDIUM";
    case Severity::High:
        return "HIGH";
    case Severity::Critical:
        return "CRITICAL";
    case Severity::Unknown:
        return "UNKNOWN";
    }
    return "UNKNOWN";
}

Severity severity_from_name(std::string_view name) {
    std::string u = upper(name);
    if (u == "LOW")
        return Severity::Low;
    if (u == "MEDIUM")
        return Severity::Medium;
    if (u == "HIGH")
        return Severity::High;
    if (u == "CRITICAL")
        return Severity::Critical;
    return Severity::Unknown;
}

ParsedFeed parse_feed(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw FeedError(e.what(), e.byte);
    }
    const json* items = find(doc, "CVE_Items");
    if (!items || !items->is_array())
        throw FeedError("feed has no CVE_Items array", 0);

    ParsedFeed out;
    for (const auto& item : *items) {
        ++out.report.items;
        try {
            if (auto entry = parse_item(item, out.report)) {
                out.entries.push_back(std::move(*entry));
                ++out.report.parsed;
            }
        } catch (const json::exception&) {
            ++out.report.skipped_malformed;
        }
    }
    return out;
}

bool looks_gzip(std::string_view bytes) {
    return bytes.size() >= 2 && static_cast<unsigned char>(bytes[0]) == 0x1f &&
           static_cast<unsigned char>(bytes[1]) == 0x8b;
}

std::string gunzip(std::string_view bytes) {
    z_stream zs{};
    if (inflateInit2(&zs, 16 + MAX_WBITS) != Z_OK)
        throw std::runtime_error("inflateInit2 failed");

    std::string out;
    char buf[1 << 16];
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(bytes.data()));
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    do {
        zs.next_out = reinterpret_cast<Bytef*>(buf);
        zs.avail_out = sizeof(buf);
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw std::runtime_error(std::string("corrupt gzip stream: ") +
                                     (zs.msg ? zs.msg : "inflate error"));
        }
        out.append(buf, sizeof(buf) - zs.avail_out);
        if (rc == Z_STREAM_END && zs.avail_in > 0) {
            // concatenated members
            if (inflateReset2(&zs, 16 + MAX_WBITS) != Z_OK)
                break;
            rc = Z_OK;
        }
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END)
        throw std::runtime_error("truncated gzip stream");
    return out;
}

void NvdCache::ingest(std::vector<CveEntry> entries, const std::string& feed_name,
                      int64_t ingested_at) {
    for (auto& entry : entries)
        entries_[entry.id] = std::move(entry);  // last write wins
    feeds_.emplace_back(feed_name, ingested_at);
}

FeedParseReport NvdCache::ingest_file(const std::filesystem::path& feed_file) {
    std::string bytes = read_file(feed_file);
    if (looks_gzip(bytes))
        bytes = gunzip(bytes);
    ParsedFeed feed = parse_feed(bytes);
    ingest(std::move(feed.entries), feed_file.filename().string(),
           static_cast<int64_t>(::time(nullptr)));
    return feed.report;
}

const CveEntry* NvdCache::lookup(const CveId& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : &it->second;
}

void NvdCache::save(const std::filesystem::path& file) const {
    atomic_write(file, [this](std::ostream& out) {
        out << kNvdCacheSchema.header_line() << '\n';
        for (const auto& [id, entry] : entries_) {
            ordered_json line;
            line["id"] = id.to_string();
            line["published"] = format_utc(entry.published);
            json cwes = json::array();
            for (const auto& cwe : entry.cwes)
                cwes.push_back(cwe.number);
            line["cwes"] = std::move(cwes);
            line["severity"] = severity_name(entry.severity);
            line["impact"] = entry.impact ? json(*entry.impact) : json(nullptr);
            out << line.dump() << '\n';
        }
    });
}

NvdCache NvdCache::load(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open cache file: " + file.string());

    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error(file.string() + ": empty cache file");
    auto header = parse_schema_header(line);
    if (!header || header->name != kNvdCacheSchema.name)
        throw std::runtime_error(file.string() + ": not an nvd-cache table");
    if (header->version != kNvdCacheSchema.version)
        throw std::runtime_error(file.string() + ": unsupported nvd-cache version " +
                                 std::to_string(header->version));

    NvdCache cache;
    std::vector<CveEntry> entries;
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
            CveEntry entry;
            auto id = parse_cve_text(row.at("id").get<std::string>());
            if (!id)
                throw std::runtime_error(where + ": bad CVE id");
            entry.id = *id;
            auto when = parse_utc(row.at("published").get<std::string>());
            if (!when)
                throw std::runtime_error(where + ": bad publish date");
            entry.published = *when;
            std::set<CweId> cwes;
            for (const auto& number : row.at("cwes")) {
                auto cwe = make_cwe(std::to_string(number.get<int>()));
                if (!cwe)
                    throw std::runtime_error(where + ": CWE number out of range");
                cwes.insert(*cwe);
            }
            entry.cwes.assign(cwes.begin(), cwes.end());
            entry.severity = severity_from_name(row.at("severity").get<std::string>());
            const auto& impact = row.at("impact");
            if (!impact.is_null()) {
                double value = impact.get<double>();
                if (value < 0.0 || value > 10.0)
                    throw std::runtime_error(where + ": impact score out of range");
                entry.impact = value;
            }
            entries.push_back(std::move(entry));
        } catch (const json::exception& e) {
            throw std::runtime_error(where + ": " + e.what());
        }
    }
    cache.ingest(std::move(entries), file.filename().string(),
                 static_cast<int64_t>(::time(nullptr)));
    return cache;
}

ResolvedRefs resolve_refs(const VulnRefSet& refs, const NvdCache& cache) {
    ResolvedRefs out;
    out.direct_cwes = refs.cwes;
    out.cwes = refs.cwes;
    for (const auto& cve : refs.cves) {
        if (const CveEntry* entry = cache.lookup(cve)) {
            out.resolved.emplace_back(cve, *entry);
            out.cwes.insert(entry->cwes.begin(), entry->cwes.end());
        } else {
            out.unresolved.push_back(cve);
        }
    }
    return out;
}

}  // namespace vcm
