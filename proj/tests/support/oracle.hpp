#pragma once

#include "vcm/refs.hpp"

#include <string>
#include <string_view>

namespace vcm::test {

// Naive character-by-character reference scanner. Implements the same
// grammar as vcm::extract_refs with none of its machinery: no regex, plain
// cursor walk. Kept deliberately independent so the two can cross-check
// each other.
inline VulnRefSet oracle_extract(std::string_view text) {
    VulnRefSet out;

    auto lower = [](char c) { return (c >= 'A' && c <= 'Z') ? char(c - 'A' + 'a') : c; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    auto word_char = [](char c) {
        return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
    };

    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        // candidate prefix "CVE-" or "CWE-", case-insensitive
        bool cve = false, cwe = false;
        if (i + 4 <= n && lower(text[i]) == 'c' && text[i + 3] == '-') {
            char second = lower(text[i + 1]);
            char third = lower(text[i + 2]);
            cve = second == 'v' && third == 'e';
            cwe = second == 'w' && third == 'e';
        }
        if (!cve && !cwe) {
            ++i;
            continue;
        }
        bool boundary_ok = i == 0 || !word_char(text[i - 1]);

        if (cve) {
            // 4 digit year, '-', then a maximal run of >= 4 digits
            size_t p = i + 4;
            if (p + 5 > n || !digit(text[p]) || !digit(text[p + 1]) || !digit(text[p + 2]) ||
                !digit(text[p + 3]) || text[p + 4] != '-') {
                ++i;
                continue;
            }
            int year = (text[p] - '0') * 1000 + (text[p + 1] - '0') * 100 +
                       (text[p + 2] - '0') * 10 + (text[p + 3] - '0');
            size_t run = p + 5;
            size_t run_end = run;
            while (run_end < n && digit(text[run_end]))
                ++run_end;
            if (run_end - run < 4) {
                ++i;
                continue;
            }
            if (boundary_ok && year >= 1999) {
                std::string digits(text.substr(run, run_end - run));
                size_t z = 0;
                while (z + 1 < digits.size() && digits[z] == '0')
                    ++z;
                out.cves.insert(CveId{year, digits.substr(z)});
            }
            i = run_end;  // candidate consumed either way
        } else {
            // 1..4 digits, maximal within the cap
            size_t run = i + 4;
            size_t run_end = run;
            while (run_end < n && run_end - run < 4 && digit(text[run_end]))
                ++run_end;
            if (run_end == run) {
                ++i;
                continue;
            }
            int value = 0;
            for (size_t k = run; k < run_end; ++k)
                value = value * 10 + (text[k] - '0');
            if (boundary_ok && value >= 1)
                out.cwes.insert(CweId{value});
            i = run_end;
        }
    }
    return out;
}

}  // namespace vcm::test
