#include "cellprobe/report.hpp"

#include <ostream>
#include <sstream>

#include "cellprobe/errors.hpp"

namespace cellprobe {

ReportFormat parse_report_format(std::string_view text) {
    if (text == "text") return ReportFormat::text;
    if (text == "machine") return ReportFormat::machine;
    throw ParameterError("unknown report format '" + std::string(text) + "' (text | machine)");
}

std::string format_rational(const Rational& r) {
    if (r.get_den() == 1) return r.get_str();
    return r.get_str() + " (~" + format_real(r.get_d()) + ")";
}

void Report::section(std::string name) {
    current_ = std::move(name);
}

void Report::add(std::string key, std::string value) {
    entries_.push_back({current_, std::move(key), std::move(value)});
}

void Report::add(std::string key, bool value) { add(std::move(key), value ? "yes" : "no"); }

void Report::add(std::string key, double value) { add(std::move(key), format_real(value)); }

void Report::add(std::string key, const Rational& value) {
    add(std::move(key), format_rational(value));
}

void Report::add(std::string key, const BigInt& value) { add(std::move(key), value.get_str()); }

void Report::add_int(std::string key, std::int64_t value) {
    add(std::move(key), std::to_string(value));
}

void Report::add_count(std::string key, std::uint64_t value) {
    add(std::move(key), std::to_string(value));
}

void Report::render(std::ostream& out, ReportFormat format) const {
    std::string last;
    bool first = true;
    for (const auto& e : entries_) {
        if (format == ReportFormat::machine) {
            out << (e.section.empty() ? "" : e.section + ".") << e.key << '=' << e.value << '\n';
            continue;
        }
        if (first || e.section != last) {
            if (!e.section.empty()) {
                if (!first) out << '\n';
                out << '[' << e.section << "]\n";
            }
            last = e.section;
            first = false;
        }
        out << (e.section.empty() ? "" : "  ") << e.key << ": " << e.value << '\n';
    }
}

std::string Report::str(ReportFormat format) const {
    std::ostringstream out;
    render(out, format);
    return out.str();
}

std::string Report::find(std::string_view section, std::string_view key) const {
    for (const auto& e : entries_) {
        if (e.section == section && e.key == key) return e.value;
    }
    return {};
}

}  // namespace cellprobe
