#include "vcm/store.hpp"

#include "vcm/lang.hpp"
#include "vcm/refs.hpp"
#include "vcm/time_util.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace vcm {

using nlohmann::json;

namespace {

using LineCheck = void (*)(const json& row, std::vector<std::string>& problems);

const json* field(const json& row, const char* key, json::value_t type,
                  std::vector<std::string>& problems) {
    auto it = row.find(key);
    if (it == row.end()) {
        problems.push_back(std::string("missing key \"") + key + "\"");
        return nullptr;
    }
    bool ok = it->type() == type ||
              (type == json::value_t::number_float && it->is_number());
    if (!ok) {
        problems.push_back(std::string("key \"") + key + "\" has wrong type");
        return nullptr;
    }
    return &*it;
}

void check_date(const json* value, const char* key, std::vector<std::string>& problems) {
    if (value && !parse_utc(value->get<std::string>()))
        problems.push_back(std::string("key \"") + key + "\" is not an RFC 3339 UTC timestamp");
}

void check_cwe_array(const json* value, const char* key, std::vector<std::string>& problems) {
    if (!value)
        return;
    std::set<int> seen;
    for (const auto& element : *value) {
        if (!element.is_number_integer()) {
            problems.push_back(std::string("key \"") + key + "\" holds a non-integer");
            return;
        }
        int number = element.get<int>();
        if (number < 1 || number > 9999)
            problems.push_back(std::string("key \"") + key + "\": CWE number out of range");
        if (!seen.insert(number).second)
            problems.push_back(std::string("key \"") + key + "\" holds duplicates");
    }
}

void check_cve_array(const json* value, const char* key, std::vector<std::string>& problems,
                     std::set<std::string>* collect = nullptr) {
    if (!value)
        return;
    for (const auto& element : *value) {
        if (!element.is_string()) {
            problems.push_back(std::string("key \"") + key + "\" holds a non-string");
            return;
        }
        auto text = element.get<std::string>();
        if (!parse_cve_text(text))
            problems.push_back(std::string("key \"") + key + "\": bad CVE id \"" + text + "\"");
        else if (collect)
            collect->insert(text);
    }
}

void check_records_line(const json& row, std::vector<std::string>& problems) {
    const json* commit = field(row, "commit", json::value_t::string, problems);
    if (commit && commit->get<std::string>().empty())
        problems.push_back("key \"commit\" is empty");
    field(row, "repo", json::value_t::string, problems);
    const json* language = field(row, "language", json::value_t::string, problems);
    if (language && !language_from_name(language->get<std::string>()))
        problems.push_back("key \"language\" is not a known language");
    check_date(field(row, "date", json::value_t::string, problems), "date", problems);

    const json* cwes = field(row, "cwes", json::value_t::array, problems);
    check_cwe_array(cwes, "cwes", problems);
    const json* direct = field(row, "direct_cwes", json::value_t::array, problems);
    check_cwe_array(direct, "direct_cwes", problems);
    if (cwes && direct) {
        std::set<json> all(cwes->begin(), cwes->end());
        for (const auto& d : *direct) {
            if (!all.contains(d)) {
                problems.push_back("direct_cwes is not a subset of cwes");
                break;
            }
        }
    }

    std::set<std::string> resolved_ids, unresolved_ids;
    const json* resolved = field(row, "resolved_cves", json::value_t::array, problems);
    check_cve_array(resolved, "resolved_cves", problems, &resolved_ids);
    const json* unresolved = field(row, "unresolved_cves", json::value_t::array, problems);
    check_cve_array(unresolved, "unresolved_cves", problems, &unresolved_ids);
    for (const auto& id : unresolved_ids) {
        if (resolved_ids.contains(id)) {
            problems.push_back("resolved and unresolved CVE lists overlap");
            break;
        }
    }
    // A record only exists for a commit that referenced something.
    if (resolved && unresolved && cwes && resolved->empty() && unresolved->empty() &&
        cwes->empty())
        problems.push_back("record carries no references at all");
}

void check_cache_line(const json& row, std::vector<std::string>& problems) {
    const json* id = field(row, "id", json::value_t::string, problems);
    if (id && !parse_cve_text(id->get<std::string>()))
        problems.push_back("key \"id\" is not a CVE id");
    check_date(field(row, "published", json::value_t::string, problems), "published", problems);
    check_cwe_array(field(row, "cwes", json::value_t::array, problems), "cwes", problems);
    const json* severity = field(row, "severity", json::value_t::string, problems);
    if (severity) {
        auto text = severity->get<std::string>();
        if (text != "LOW" && text != "MEDIUM" && text != "HIGH" && text != "CRITICAL" &&
            text != "UNKNOWN")
            problems.push_back("key \"severity\" is not a known severity");
    }
    auto it = row.find("impact");
    if (it == row.end()) {
        problems.push_back("missing key \"impact\"");
    } else if (!it->is_null()) {
        if (!it->is_number())
            problems.push_back("key \"impact\" must be a number or null");
        else if (it->get<double>() < 0.0 || it->get<double>() > 10.0)
            problems.push_back("key \"impact\" out of range");
    }
}

void check_commits_line(const json& row, std::vector<std::string>& problems) {
    const json* id = field(row, "id", json::value_t::string, problems);
    if (id) {
        auto text = id->get<std::string>();
        bool hex = !text.empty();
        for (char c : text)
            hex = hex && ((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
                          (c >= 'A' && c <= 'F'));
        if (!hex)
            problems.push_back("key \"id\" is not a hex digest");
    }
    field(row, "repo", json::value_t::string, problems);
    check_date(field(row, "author_date", json::value_t::string, problems), "author_date",
               problems);
    check_date(field(row, "committer_date", json::value_t::string, problems), "committer_date",
               problems);
    field(row, "message", json::value_t::string, problems);
    const json* root = field(row, "root", json::value_t::array, problems);
    if (root) {
        for (const auto& name : *root) {
            if (!name.is_string()) {
                problems.push_back("key \"root\" holds a non-string");
                break;
            }
        }
    }
}

LineCheck checker_for(const std::string& name) {
    if (name == kRecordsSchema.name)
        return &check_records_line;
    if (name == kNvdCacheSchema.name)
        return &check_cache_line;
    if (name == kCommitsSchema.name)
        return &check_commits_line;
    return nullptr;
}

}  // namespace

std::string SchemaVersion::header_line() const {
    return "{\"schema\":\"" + name + "/" + std::to_string(version) + "\"}";
}

std::optional<SchemaVersion> parse_schema_header(std::string_view line) {
    json row = json::parse(line, nullptr, false);
    if (row.is_discarded() || !row.is_object() || row.size() != 1)
        return std::nullopt;
    auto it = row.find("schema");
    if (it == row.end() || !it->is_string())
        return std::nullopt;
    std::string text = it->get<std::string>();
    size_t slash = text.rfind('/');
    if (slash == std::string::npos || slash == 0 || slash + 1 == text.size())
        return std::nullopt;
    SchemaVersion version;
    version.name = text.substr(0, slash);
    try {
        size_t used = 0;
        version.version = std::stoi(text.substr(slash + 1), &used);
        if (used != text.size() - slash - 1)
            return std::nullopt;
    } catch (const std::exception&) {
        return std::nullopt;
    }
    return version;
}

ValidationReport validate_file(const std::filesystem::path& file, const SchemaVersion& expected) {
    LineCheck check = checker_for(expected.name);
    if (!check)
        throw std::invalid_argument("no validator registered for schema " + expected.name);

    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + file.string());

    ValidationReport report;
    std::string line;
    if (!std::getline(in, line)) {
        report.violations.push_back({1, "missing schema header"});
        return report;
    }
    auto header = parse_schema_header(line);
    if (!header) {
        report.violations.push_back({1, "first line is not a schema header"});
        return report;
    }
    if (header->name != expected.name) {
        report.violations.push_back(
            {1, "schema name is \"" + header->name + "\", expected \"" + expected.name + "\""});
        return report;
    }
    if (header->version != expected.version) {
        report.violations.push_back(
            {1, "unknown major version " + std::to_string(header->version)});
        return report;
    }
    report.header_ok = true;

    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        ++report.data_lines;
        json row = json::parse(line, nullptr, false);
        if (row.is_discarded() || !row.is_object()) {
            report.violations.push_back({line_no, "not a JSON object"});
            continue;
        }
        std::vector<std::string> problems;
        check(row, problems);
        for (auto& problem : problems)
            report.violations.push_back({line_no, std::move(problem)});
    }
    return report;
}

void atomic_write(const std::filesystem::path& file,
                  const std::function<void(std::ostream&)>& writer) {
    auto parent = file.parent_path();
    if (!parent.empty())
        std::filesystem::create_directories(parent);
    auto tmp = file;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        writer(out);
        out.flush();
        if (!out)
            throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, file);
}

std::string read_file(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + file.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (!in.good() && !in.eof())
        throw std::runtime_error("read failed: " + file.string());
    return std::move(buf).str();
}

}  // namespace vcm
