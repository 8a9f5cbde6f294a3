#pragma once

#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>

namespace vcm {

// RFC 4180 with LF line endings; decimals carry exactly three fractional
// digits so report files are byte-reproducible.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    CsvWriter& field(std::string_view text) {
        sep();
        if (text.find_first_of(",\"\n\r") != std::string_view::npos) {
            out_ << '"';
            for (char c : text) {
                if (c == '"')
                    out_ << '"';
                out_ << c;
            }
            out_ << '"';
        } else {
            out_ << text;
        }
        return *this;
    }

    CsvWriter& field(uint64_t value) {
        sep();
        out_ << value;
        return *this;
    }

    CsvWriter& field(int value) {
        sep();
        out_ << value;
        return *this;
    }

    CsvWriter& fixed3(double value) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.3f", value);
        return field(std::string_view(buf));
    }

    CsvWriter& empty() {
        sep();
        return *this;
    }

    void endrow() {
        out_ << '\n';
        first_ = true;
    }

private:
    void sep() {
        if (!first_)
            out_ << ',';
        first_ = false;
    }

    std::ostream& out_;
    bool first_ = true;
};

}  // namespace vcm
