#include "cellprobe/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "cellprobe/errors.hpp"

namespace cellprobe {

Distribution::Distribution(std::vector<std::uint32_t> alphabets,
                           std::vector<std::pair<Tuple, std::uint64_t>> weighted)
    : alphabets_(std::move(alphabets)) {
    std::map<Tuple, std::uint64_t> merged;
    for (auto& [t, w] : weighted) {
        if (t.size() != alphabets_.size()) {
            throw DomainError("tuple of length " + std::to_string(t.size()) +
                              " in a distribution of arity " + std::to_string(alphabets_.size()));
        }
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (t[k] >= alphabets_[k]) {
                throw DomainError("value " + std::to_string(t[k]) + " outside alphabet [" +
                                  std::to_string(alphabets_[k]) + "] at coordinate " +
                                  std::to_string(k));
            }
        }
        if (w == 0) continue;
        auto& slot = merged[std::move(t)];
        if (slot > UINT64_MAX - w) throw SizeError("distribution weights overflow", w);
        slot += w;
    }
    if (merged.empty()) throw DomainError("distribution has empty support");
    tuples_.reserve(merged.size());
    weights_.reserve(merged.size());
    for (auto& [t, w] : merged) {
        if (total_ > UINT64_MAX - w) throw SizeError("distribution weights overflow", w);
        total_ += w;
        tuples_.push_back(t);
        weights_.push_back(w);
    }
}

Distribution Distribution::uniform(std::vector<std::uint32_t> alphabets, std::vector<Tuple> support) {
    std::vector<std::pair<Tuple, std::uint64_t>> weighted;
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    weighted.reserve(support.size());
    for (auto& t : support) weighted.emplace_back(std::move(t), 1);
    return Distribution(std::move(alphabets), std::move(weighted));
}

Distribution Distribution::uniform_bits(const std::vector<BitVector>& inputs) {
    if (inputs.empty()) throw DomainError("uniform distribution over an empty set");
    const std::size_t n = inputs.front().size();
    std::vector<Tuple> support;
    support.reserve(inputs.size());
    for (const auto& x : inputs) {
        if (x.size() != n) throw DomainError("bit strings of different lengths");
        support.emplace_back(x.bits().begin(), x.bits().end());
    }
    return uniform(std::vector<std::uint32_t>(n, 2), std::move(support));
}

Distribution Distribution::uniform_product(std::vector<std::uint32_t> alphabets) {
    BigInt size = 1;
    for (auto m : alphabets) size *= m;
    if (size > (1 << 24)) throw SizeError("product space too large to enumerate", size.get_ui());
    const std::uint64_t count = size.get_ui();
    std::vector<std::pair<Tuple, std::uint64_t>> weighted;
    weighted.reserve(count);
    Tuple t(alphabets.size(), 0);
    for (std::uint64_t k = 0; k < count; ++k) {
        weighted.emplace_back(t, 1);
        for (std::size_t pos = t.size(); pos-- > 0;) {
            if (++t[pos] < alphabets[pos]) break;
            t[pos] = 0;
        }
    }
    return Distribution(std::move(alphabets), std::move(weighted));
}

Rational Distribution::probability(const Tuple& t) const {
    auto it = std::lower_bound(tuples_.begin(), tuples_.end(), t);
    if (it == tuples_.end() || *it != t) return Rational(0);
    return probability_at(static_cast<std::size_t>(it - tuples_.begin()));
}

Rational Distribution::probability_at(std::size_t k) const {
    return make_rational(weights_.at(k), total_);
}

BigInt Distribution::space_size() const {
    BigInt size = 1;
    for (auto m : alphabets_) size *= m;
    return size;
}

bool Distribution::is_uniform_on_support() const {
    return std::all_of(weights_.begin(), weights_.end(),
                       [&](std::uint64_t w) { return w == weights_.front(); });
}

Distribution Distribution::marginal(std::span<const std::size_t> coords) const {
    std::vector<std::uint32_t> alph;
    for (auto c : coords) {
        if (c >= arity()) throw RangeError("marginal coordinate " + std::to_string(c) + " out of range");
        alph.push_back(alphabets_[c]);
    }
    std::map<Tuple, std::uint64_t> merged;
    Tuple key(coords.size());
    for (std::size_t k = 0; k < tuples_.size(); ++k) {
        for (std::size_t j = 0; j < coords.size(); ++j) key[j] = tuples_[k][coords[j]];
        merged[key] += weights_[k];
    }
    std::vector<std::pair<Tuple, std::uint64_t>> weighted(merged.begin(), merged.end());
    return Distribution(std::move(alph), std::move(weighted));
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

[[noreturn]] void bad_line(std::size_t line, const std::string& why) {
    throw FormatError("line " + std::to_string(line) + ": " + why);
}

std::uint32_t parse_u32(std::string_view s, std::size_t line) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string_view::npos || s.size() > 9) {
        bad_line(line, "expected a small non-negative integer, got '" + std::string(s) + "'");
    }
    return static_cast<std::uint32_t>(std::stoul(std::string(s)));
}

Rational parse_probability(std::string_view s, std::size_t line) {
    const auto slash = s.find('/');
    const std::string digits = "0123456789";
    if (slash != std::string_view::npos) {
        const auto num = s.substr(0, slash);
        const auto den = s.substr(slash + 1);
        if (num.empty() || den.empty() || num.find_first_not_of(digits) != std::string_view::npos ||
            den.find_first_not_of(digits) != std::string_view::npos) {
            bad_line(line, "bad fraction '" + std::string(s) + "'");
        }
        BigInt d{std::string(den), 10};
        if (d == 0) bad_line(line, "zero denominator");
        return make_rational(BigInt(std::string(num), 10), d);
    }
    const auto dot = s.find('.');
    const auto whole = s.substr(0, dot);
    const auto frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || whole.find_first_not_of(digits) != std::string_view::npos ||
        frac.find_first_not_of(digits) != std::string_view::npos) {
        bad_line(line, "bad probability '" + std::string(s) + "'");
    }
    BigInt num(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    return make_rational(num, den);
}

Tuple parse_tuple(std::string_view s, std::size_t line, bool& is_bits) {
    Tuple t;
    if (s.find(',') == std::string_view::npos && s.find_first_not_of("01") == std::string_view::npos) {
        is_bits = true;
        for (char ch : s) t.push_back(ch == '1');
        return t;
    }
    is_bits = false;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        t.push_back(parse_u32(trim(s.substr(start, comma - start)), line));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return t;
}

}  // namespace

Distribution read_distribution(std::istream& in) {
    std::vector<std::uint32_t> header;
    std::vector<std::pair<Tuple, Rational>> entries;
    bool any_bits = false, any_list = false;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = raw;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.starts_with("alphabet:")) {
            auto rest = trim(line.substr(9));
            std::size_t k = 0;
            while (k < rest.size()) {
                const auto sp = rest.find_first_of(" \t", k);
                const auto tok = rest.substr(k, sp == std::string_view::npos ? rest.npos : sp - k);
                if (!tok.empty()) header.push_back(parse_u32(tok, line_no));
                if (sp == std::string_view::npos) break;
                k = sp + 1;
            }
            if (header.empty()) bad_line(line_no, "empty alphabet header");
            continue;
        }
        const auto sp = line.find_first_of(" \t");
        if (sp == std::string_view::npos) bad_line(line_no, "expected 'tuple probability'");
        bool is_bits = false;
        Tuple t = parse_tuple(trim(line.substr(0, sp)), line_no, is_bits);
        (is_bits ? any_bits : any_list) = true;
        entries.emplace_back(std::move(t), parse_probability(trim(line.substr(sp + 1)), line_no));
    }
    if (entries.empty()) throw FormatError("distribution file has no entries");
    const std::size_t arity = entries.front().first.size();
    for (const auto& [t, p] : entries) {
        if (t.size() != arity) throw FormatError("tuples of different lengths");
    }

    std::vector<std::uint32_t> alphabets;
    if (header.size() == 1) {
        alphabets.assign(arity, header.front());
    } else if (!header.empty()) {
        if (header.size() != arity) throw FormatError("alphabet header does not match tuple length");
        alphabets = header;
    } else if (any_bits && !any_list) {
        alphabets.assign(arity, 2);
    } else {
        alphabets.assign(arity, 2);
        for (const auto& [t, p] : entries) {
            for (std::size_t k = 0; k < arity; ++k) alphabets[k] = std::max(alphabets[k], t[k] + 1);
        }
    }

    Rational sum = 0;
    BigInt lcm = 1;
    for (const auto& [t, p] : entries) {
        sum += p;
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), p.get_den_mpz_t());
    }
    if (std::fabs(to_double(sum - 1)) > 1e-12) {
        throw FormatError("probabilities sum to " + to_string(sum) + ", not 1");
    }
    std::vector<std::pair<Tuple, std::uint64_t>> weighted;
    for (auto& [t, p] : entries) {
        Rational scaled = p * Rational(lcm);
        const BigInt w = scaled.get_num();
        if (!w.fits_ulong_p() || w > BigInt("9223372036854775807")) {
            throw FormatError("probabilities need a common denominator that is too large");
        }
        weighted.emplace_back(std::move(t), w.get_ui());
    }
    try {
        return Distribution(std::move(alphabets), std::move(weighted));
    } catch (const DomainError& e) {
        throw FormatError(e.what());
    }
}

Distribution read_distribution_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot read distribution file " + path.string());
    return read_distribution(in);
}

void write_distribution(std::ostream& out, const Distribution& dist) {
    bool bits = std::all_of(dist.alphabets().begin(), dist.alphabets().end(),
                            [](std::uint32_t m) { return m == 2; });
    out << "alphabet:";
    for (auto m : dist.alphabets()) out << ' ' << m;
    out << "\n";
    for (std::size_t k = 0; k < dist.support_size(); ++k) {
        const auto& t = dist.tuples()[k];
        for (std::size_t j = 0; j < t.size(); ++j) {
            if (!bits && j) out << ',';
            out << t[j];
        }
        out << ' ' << to_string(dist.probability_at(k)) << "\n";
    }
}

}  // namespace cellprobe
