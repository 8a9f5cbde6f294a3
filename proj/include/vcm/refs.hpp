#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>

namespace vcm {

// One CVE identifier. The sequence part keeps its digits as text so that
// arbitrarily long runs survive intact; leading zeros are normalized away
// and re-padded to the canonical minimum of four digits when rendering,
// so CVE-2019-0001 and cve-2019-00001 compare equal.
struct CveId {
    int year = 0;           // 4 digits, >= 1999
    std::string sequence;   // digits without leading zeros; "0" for an all-zero run

    std::string to_string() const;

    bool operator==(const CveId&) const = default;
    bool operator<(const CveId& other) const;
};

struct CweId {
    int number = 0;  // 1..9999

    std::string to_string() const;

    auto operator<=>(const CweId&) const = default;
};

// Deduplicated references found in one commit message. An identifier that
// appears N times in a message appears exactly once here.
struct VulnRefSet {
    std::set<CveId> cves;
    std::set<CweId> cwes;

    bool empty() const { return cves.empty() && cwes.empty(); }
    bool operator==(const VulnRefSet&) const = default;
};

struct ExtractionReport {
    bool matched_filter = false;
    VulnRefSet refs;
    // Passed the first-stage filter but yielded no identifiers
    // (e.g. "execve-safe", "nvd-downloader").
    bool false_positive = false;
};

// Validating constructors. make_cve rejects years before 1999 and sequences
// shorter than four digits; make_cwe rejects values outside 1..9999 after
// leading-zero removal.
std::optional<CveId> make_cve(int year, std::string_view sequence_digits);
std::optional<CweId> make_cwe(std::string_view digits);

// Strict full-string parse of "CVE-YYYY-NNNN..." (prefix case-insensitive).
std::optional<CveId> parse_cve_text(std::string_view text);

// Cheap pre-check: does the message contain "CVE-", "CWE-" or "NVD-",
// case-insensitively, anywhere?
bool first_stage_filter(std::string_view message);

// Extracts every distinct CVE/CWE identifier. The prefix match is
// case-insensitive, the digit run is maximal-munch, and a candidate whose
// start is immediately preceded by an ASCII alphanumeric character is
// dropped ("XCVE-2020-1234" yields nothing, "(CVE-2020-1234)" matches).
// "NVD-" text contributes only through CVE/CWE ids embedded in it.
VulnRefSet extract_refs(std::string_view message);

// first_stage_filter + extract_refs, with the false-positive verdict.
ExtractionReport classify_message(std::string_view message);

// Canonical forms joined by single spaces, CVEs before CWEs.
std::string render_refs(const VulnRefSet& refs);

}  // namespace vcm
