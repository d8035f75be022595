#include "cellprobe/scheme_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "cellprobe/errors.hpp"
#include "cellprobe/reference_schemes.hpp"

namespace cellprobe {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t k = 0;
    while (k < s.size()) {
        while (k < s.size() && (s[k] == ' ' || s[k] == '\t')) ++k;
        const std::size_t start = k;
        while (k < s.size() && s[k] != ' ' && s[k] != '\t') ++k;
        if (k > start) out.push_back(s.substr(start, k - start));
    }
    return out;
}

template <typename T>
T parse_int(std::string_view text, std::size_t line) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw FormatError("line " + std::to_string(line) + ": expected an integer, got '" +
                          std::string(text) + "'");
    }
    return value;
}

CellValues parse_values(std::string_view text, std::size_t line) {
    CellValues out;
    const auto tokens = split_ws(text);
    if (tokens.size() == 1 && tokens[0] == "-") return out;
    for (auto t : tokens) out.push_back(parse_int<std::uint32_t>(t, line));
    return out;
}

BuiltinRef parse_builtin(std::string_view text, std::size_t line) {
    const auto tokens = split_ws(text);
    BuiltinRef ref;
    ref.name = std::string(tokens.at(0).substr(std::string_view("builtin:").size()));
    for (std::size_t k = 1; k < tokens.size(); ++k) {
        const auto eq = tokens[k].find('=');
        if (eq == std::string_view::npos) {
            throw FormatError("line " + std::to_string(line) + ": builtin parameter '" +
                              std::string(tokens[k]) + "' is not key=value");
        }
        ref.params[std::string(tokens[k].substr(0, eq))] =
            parse_int<std::int64_t>(tokens[k].substr(eq + 1), line);
    }
    return ref;
}

std::string format_values(const CellValues& v) {
    if (v.empty()) return "-";
    std::string s;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) s += ' ';
        s += std::to_string(v[k]);
    }
    return s;
}

std::string format_builtin(const BuiltinRef& ref) {
    std::string s = "builtin:" + ref.name;
    for (const auto& [k, v] : ref.params) s += " " + k + "=" + std::to_string(v);
    return s;
}

enum class Section { header, encoder_table, probes, decoder_table };

}  // namespace

Scheme read_scheme(std::istream& in) {
    std::optional<std::size_t> n, u, q;
    std::optional<std::uint32_t> alphabet;
    std::optional<Domain> domain;
    std::optional<BuiltinRef> enc_ref, dec_ref;
    bool enc_table = false, dec_table = false, saw_probes = false;
    EncoderTable encoder;
    std::vector<ProbeSet> probes;
    std::vector<DecoderTable> decoders;
    std::optional<std::size_t> current_query;

    Section section = Section::header;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto arrow = line.find("->");
        if (arrow != std::string_view::npos) {
            const auto lhs = trim(line.substr(0, arrow));
            const auto rhs = trim(line.substr(arrow + 2));
            if (section == Section::encoder_table) {
                encoder[BitVector::parse(lhs)] = parse_values(rhs, line_no);
            } else if (section == Section::decoder_table) {
                if (!current_query) {
                    throw FormatError("line " + std::to_string(line_no) +
                                      ": decoder entry before any 'query <i>:'");
                }
                decoders[*current_query - 1][parse_values(lhs, line_no)] =
                    parse_int<std::int64_t>(rhs, line_no);
            } else {
                throw FormatError("line " + std::to_string(line_no) + ": unexpected table entry");
            }
            continue;
        }
        if (section == Section::decoder_table && line.starts_with("query ") && line.ends_with(":")) {
            const auto idx = trim(line.substr(6, line.size() - 7));
            const auto i = parse_int<std::size_t>(idx, line_no);
            if (!n || i < 1 || i > *n) {
                throw FormatError("line " + std::to_string(line_no) + ": query index out of range");
            }
            current_query = i;
            continue;
        }
        const auto colon = line.find(':');
        const std::string_view key =
            colon == std::string_view::npos ? std::string_view{} : trim(line.substr(0, colon));
        const std::string_view value =
            colon == std::string_view::npos ? std::string_view{} : trim(line.substr(colon + 1));
        const bool is_header = colon != std::string_view::npos &&
                               (key == "n" || key == "u" || key == "q" || key == "cell_alphabet" ||
                                key == "domain" || key == "encoder" || key == "probes" ||
                                key == "decoders");
        if (section == Section::probes && !is_header) {
            probes.push_back(parse_values(line, line_no));
            continue;
        }
        if (!is_header) {
            throw FormatError("line " + std::to_string(line_no) + ": unrecognised line '" +
                              std::string(line) + "'");
        }
        section = Section::header;
        if (key == "n") {
            n = parse_int<std::size_t>(value, line_no);
        } else if (key == "u") {
            u = parse_int<std::size_t>(value, line_no);
        } else if (key == "q") {
            q = parse_int<std::size_t>(value, line_no);
        } else if (key == "cell_alphabet") {
            alphabet = parse_int<std::uint32_t>(value, line_no);
        } else if (key == "domain") {
            domain = parse_domain(value);
        } else if (key == "encoder") {
            if (value == "table:" || value == "table") {
                enc_table = true;
                section = Section::encoder_table;
            } else if (value.starts_with("builtin:")) {
                enc_ref = parse_builtin(value, line_no);
            } else {
                throw FormatError("line " + std::to_string(line_no) + ": bad encoder spec");
            }
        } else if (key == "probes") {
            saw_probes = true;
            section = Section::probes;
        } else if (key == "decoders") {
            if (value == "table:" || value == "table") {
                if (!n) throw FormatError("decoders table appears before n");
                dec_table = true;
                decoders.assign(*n, {});
                section = Section::decoder_table;
            } else if (value.starts_with("builtin:")) {
                dec_ref = parse_builtin(value, line_no);
            } else {
                throw FormatError("line " + std::to_string(line_no) + ": bad decoders spec");
            }
        }
    }

    if (!n || !u || !q || !alphabet || !domain) {
        throw FormatError("scheme file is missing one of n, u, q, cell_alphabet, domain");
    }
    if (!saw_probes) throw FormatError("scheme file has no probes section");
    if (!enc_table && !enc_ref) throw FormatError("scheme file has no encoder");
    if (!dec_table && !dec_ref) throw FormatError("scheme file has no decoders");

    const SchemeShape shape{*n, *u, *q, *alphabet, *domain};
    ProbeFamily family(std::move(probes), *u);

    if (enc_table && dec_table) {
        return Scheme::from_tables(shape, std::move(family), std::move(encoder),
                                   std::move(decoders));
    }
    const BuiltinRef& ref = enc_ref ? *enc_ref : *dec_ref;
    if (enc_ref && dec_ref && !(*enc_ref == *dec_ref)) {
        throw FormatError("builtin encoder and decoders must name the same scheme");
    }
    Scheme built = build_reference(params_from_builtin(ref, *n, *alphabet));
    if (!(built.shape() == shape)) {
        throw FormatError("header fields disagree with builtin:" + ref.name);
    }
    if (!(built.probes() == family)) {
        throw FormatError("probe sets disagree with builtin:" + ref.name);
    }
    if (enc_table) built = built.with_encoder_table(std::move(encoder));
    if (dec_table) built = built.with_decoder_tables(std::move(decoders));
    return built;
}

Scheme read_scheme_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read scheme file " + path.string());
    return read_scheme(in);
}

void write_scheme(std::ostream& out, const Scheme& s) {
    out << "n: " << s.n() << "\n";
    out << "u: " << s.u() << "\n";
    out << "q: " << s.q() << "\n";
    out << "cell_alphabet: " << s.cell_alphabet() << "\n";
    out << "domain: " << to_string(s.domain()) << "\n";
    if (s.encoder_is_table()) {
        out << "encoder: table:\n";
        for (const auto& [x, cells] : s.encoder_table()) {
            out << "  " << x.str() << " -> " << format_values(cells) << "\n";
        }
    } else {
        out << "encoder: " << format_builtin(s.encoder_builtin()) << "\n";
    }
    out << "probes:\n";
    for (const auto& p : s.probes().sets()) out << "  " << format_values(p) << "\n";
    if (s.decoders_are_tables()) {
        out << "decoders: table:\n";
        const auto& tables = s.decoder_tables();
        for (std::size_t i = 0; i < tables.size(); ++i) {
            out << "  query " << (i + 1) << ":\n";
            for (const auto& [key, answer] : tables[i]) {
                out << "    " << format_values(key) << " -> " << answer << "\n";
            }
        }
    } else {
        out << "decoders: " << format_builtin(s.decoder_builtin()) << "\n";
    }
}

void write_scheme_file(const std::filesystem::path& path, const Scheme& scheme) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write scheme file " + path.string());
    write_scheme(out, scheme);
}

bool same_scheme(const Scheme& a, const Scheme& b) {
    if (!(a.shape() == b.shape()) || !(a.probes() == b.probes())) return false;
    if (a.encoder_is_table() != b.encoder_is_table()) return false;
    if (a.encoder_is_table() ? a.encoder_table() != b.encoder_table()
                             : !(a.encoder_builtin() == b.encoder_builtin())) {
        return false;
    }
    if (a.decoders_are_tables() != b.decoders_are_tables()) return false;
    return a.decoders_are_tables() ? a.decoder_tables() == b.decoder_tables()
                                   : a.decoder_builtin() == b.decoder_builtin();
}

void write_report(std::ostream& out, const VerificationReport& r) {
    out << "status: " << (r.pass ? "pass" : "fail") << "\n";
    out << "checked: " << r.checked << "\n";
    out << "counterexample: ";
    if (!r.counterexample) {
        out << "none\n";
        return;
    }
    const auto& c = *r.counterexample;
    out << "x=" << c.x.str() << " i=" << c.i << " expected=" << c.expected << " got=";
    if (c.got) {
        out << *c.got;
    } else {
        out << "undefined";
    }
    out << "\n";
}

}  // namespace cellprobe
