#include "vcm/refs.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace vcm {

namespace {

bool ascii_alnum(char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 0x80 && std::isalnum(u) != 0;
}

char lower(char c) {
    return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
    auto it = std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end(),
                          [](char a, char b) { return lower(a) == lower(b); });
    return it != haystack.end();
}

const std::regex& cve_pattern() {
    static const std::regex re(R"(CVE-\d{4}-\d{4,})",
                               std::regex::icase | std::regex::optimize);
    return re;
}

const std::regex& cwe_pattern() {
    static const std::regex re(R"(CWE-\d{1,4})",
                               std::regex::icase | std::regex::optimize);
    return re;
}

// Digits with leading zeros stripped; "0" when the run was all zeros.
std::string normalize_digits(std::string_view digits) {
    size_t i = 0;
    while (i + 1 < digits.size() && digits[i] == '0')
        ++i;
    return std::string(digits.substr(i));
}

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

std::string CveId::to_string() const {
    std::string seq = sequence;
    if (seq.size() < 4)
        seq.insert(0, 4 - seq.size(), '0');
    return "CVE-" + std::to_string(year) + "-" + seq;
}

bool CveId::operator<(const CveId& other) const {
    if (year != other.year)
        return year < other.year;
    // Numeric order on normalized digit strings: shorter means smaller.
    if (sequence.size() != other.sequence.size())
        return sequence.size() < other.sequence.size();
    return sequence < other.sequence;
}

std::string CweId::to_string() const {
    return "CWE-" + std::to_string(number);
}

std::optional<CveId> make_cve(int year, std::string_view sequence_digits) {
    if (year < 1999 || year > 9999)
        return std::nullopt;
    if (sequence_digits.size() < 4 || !all_digits(sequence_digits))
        return std::nullopt;
    return CveId{year, normalize_digits(sequence_digits)};
}

std::optional<CweId> make_cwe(std::string_view digits) {
    if (digits.empty() || digits.size() > 4 || !all_digits(digits))
        return std::nullopt;
    int value = 0;
    for (char c : digits)
        value = value * 10 + (c - '0');
    if (value < 1)
        return std::nullopt;
    return CweId{value};
}

std::optional<CveId> parse_cve_text(std::string_view text) {
    if (text.size() < 13)
        return std::nullopt;
    if (lower(text[0]) != 'c' || lower(text[1]) != 'v' || lower(text[2]) != 'e' || text[3] != '-')
        return std::nullopt;
    std::string_view year_part = text.substr(4, 4);
    if (!all_digits(year_part) || text[8] != '-')
        return std::nullopt;
    int year = (year_part[0] - '0') * 1000 + (year_part[1] - '0') * 100 +
               (year_part[2] - '0') * 10 + (year_part[3] - '0');
    return make_cve(year, text.substr(9));
}

bool first_stage_filter(std::string_view message) {
    return contains_ci(message, "CVE-") || contains_ci(message, "CWE-") ||
           contains_ci(message, "NVD-");
}

VulnRefSet extract_refs(std::string_view message) {
    VulnRefSet out;
    const char* begin = message.data();
    const char* end = begin + message.size();

    for (std::cregex_iterator it(begin, end, cve_pattern()), last; it != last; ++it) {
        const auto& m = (*it)[0];
        if (m.first != begin && ascii_alnum(*(m.first - 1)))
            continue;  // embedded in a word, e.g. "XCVE-2020-1234"
        std::string_view text(m.first, static_cast<size_t>(m.second - m.first));
        if (auto id = parse_cve_text(text))
            out.cves.insert(*id);
    }
    for (std::cregex_iterator it(begin, end, cwe_pattern()), last; it != last; ++it) {
        const auto& m = (*it)[0];
        if (m.first != begin && ascii_alnum(*(m.first - 1)))
            continue;
        std::string_view text(m.first, static_cast<size_t>(m.second - m.first));
        if (auto id = make_cwe(text.substr(4)))
            out.cwes.insert(*id);
    }
    return out;
}

ExtractionReport classify_message(std::string_view message) {
    ExtractionReport report;
    report.matched_filter = first_stage_filter(message);
    if (report.matched_filter)
        report.refs = extract_refs(message);
    report.false_positive = report.matched_filter && report.refs.empty();
    return report;
}

std::string render_refs(const VulnRefSet& refs) {
    std::string out;
    for (const auto& cve : refs.cves) {
        if (!out.empty())
            out += ' ';
        out += cve.to_string();
    }
    for (const auto& cwe : refs.cwes) {
        if (!out.empty())
            out += ' ';
        out += cwe.to_string();
    }
    return out;
}

}  // namespace vcm
