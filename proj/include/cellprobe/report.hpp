#pragma once

// Structured key/value reports. Text form groups keys under "[section]"
// headers; machine form writes one "section.key=value" line per entry.
// Both are byte-stable for identical content.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "cellprobe/rational.hpp"

namespace cellprobe {

enum class ReportFormat { text, machine };

ReportFormat parse_report_format(std::string_view text);

class Report {
public:
    void section(std::string name);

    void add(std::string key, std::string value);
    void add(std::string key, const char* value) { add(std::move(key), std::string(value)); }
    void add(std::string key, bool value);
    void add(std::string key, double value);
    void add(std::string key, const Rational& value);  // "a/b (~decimal)"
    void add(std::string key, const BigInt& value);
    void add_int(std::string key, std::int64_t value);
    void add_count(std::string key, std::uint64_t value);
    template <typename Seq>
    void add_list(std::string key, const Seq& values) {
        std::string s;
        for (const auto& v : values) {
            if (!s.empty()) s += ' ';
            s += std::to_string(v);
        }
        add(std::move(key), s.empty() ? std::string("-") : s);
    }

    void render(std::ostream& out, ReportFormat format) const;
    std::string str(ReportFormat format) const;

    struct Entry {
        std::string section;
        std::string key;
        std::string value;
    };
    const std::vector<Entry>& entries() const noexcept { return entries_; }
    // Value of section.key, or empty.
    std::string find(std::string_view section, std::string_view key) const;

private:
    std::string current_;
    std::vector<Entry> entries_;
};

std::string format_rational(const Rational& r);

}  // namespace cellprobe
