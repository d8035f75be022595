#include "cellprobe/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "cellprobe/brackets.hpp"
#include "cellprobe/errors.hpp"

namespace cellprobe {

std::string_view to_string(Domain d) {
    return d == Domain::all_bitstrings ? "all_bitstrings" : "balanced_brackets";
}

Domain parse_domain(std::string_view text) {
    if (text == "all_bitstrings") return Domain::all_bitstrings;
    if (text == "balanced_brackets") return Domain::balanced_brackets;
    throw FormatError("unknown domain '" + std::string(text) + "'");
}

std::vector<BitVector> domain_inputs(Domain d, std::size_t n) {
    return d == Domain::all_bitstrings ? all_bitstrings(n) : enumerate_bal(n);
}

BigInt domain_size(Domain d, std::size_t n) {
    return d == Domain::all_bitstrings ? pow2(n) : catalan_count(n);
}

bool in_domain(Domain d, std::size_t n, const BitVector& x) {
    if (x.size() != n) return false;
    return d == Domain::all_bitstrings || is_balanced(x);
}

// ---------------------------------------------------------------------------

ProbeFamily::ProbeFamily(std::vector<ProbeSet> sets, std::size_t universe)
    : sets_(std::move(sets)), universe_(universe) {
    for (auto& s : sets_) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (!s.empty() && s.back() >= universe_) {
            throw RangeError("probe index " + std::to_string(s.back()) + " outside [0, " +
                             std::to_string(universe_) + ")");
        }
        q_ = std::max(q_, s.size());
    }
}

namespace {

std::size_t max_index_plus_one(const std::vector<ProbeSet>& sets) {
    std::size_t u = 0;
    for (const auto& s : sets) {
        for (auto c : s) u = std::max<std::size_t>(u, std::size_t{c} + 1);
    }
    return u;
}

}  // namespace

ProbeFamily::ProbeFamily(std::vector<ProbeSet> sets)
    : ProbeFamily(sets, max_index_plus_one(sets)) {}

const ProbeSet& ProbeFamily::query(std::size_t i) const {
    if (i < 1 || i > sets_.size()) {
        throw RangeError("query index " + std::to_string(i) + " outside [1, " +
                         std::to_string(sets_.size()) + "]");
    }
    return sets_[i - 1];
}

// ---------------------------------------------------------------------------

Scheme Scheme::from_tables(SchemeShape shape, ProbeFamily probes, EncoderTable encoder,
                           std::vector<DecoderTable> decoders) {
    Scheme s;
    s.shape_ = shape;
    s.probes_ = std::move(probes);
    auto enc = std::make_shared<const EncoderTable>(std::move(encoder));
    s.encoder_table_ = enc;
    s.encode_fn_ = [enc](const BitVector& x) -> CellValues {
        auto it = enc->find(x);
        if (it == enc->end()) throw DomainError("encoder table has no entry for " + x.str());
        return it->second;
    };
    auto dec = std::make_shared<const std::vector<DecoderTable>>(std::move(decoders));
    s.decoder_tables_ = dec;
    s.decode_fn_ = [dec](std::size_t i, std::span<const std::uint32_t> values)
        -> std::optional<std::int64_t> {
        const auto& table = (*dec)[i - 1];
        auto it = table.find(CellValues(values.begin(), values.end()));
        if (it == table.end()) return std::nullopt;
        return it->second;
    };
    s.validate();
    return s;
}

Scheme Scheme::from_builtin(SchemeShape shape, ProbeFamily probes, BuiltinRef encoder_ref,
                            EncodeFn encoder, BuiltinRef decoder_ref, DecodeFn decoder) {
    Scheme s;
    s.shape_ = shape;
    s.probes_ = std::move(probes);
    s.encoder_builtin_ = std::move(encoder_ref);
    s.encode_fn_ = std::move(encoder);
    s.decoder_builtin_ = std::move(decoder_ref);
    s.decode_fn_ = std::move(decoder);
    s.validate();
    return s;
}

void Scheme::validate() const {
    if (shape_.n < 1) throw ParameterError("scheme requires n >= 1");
    if (shape_.cell_alphabet < 2) throw ParameterError("cell_alphabet must be >= 2");
    if (shape_.domain == Domain::balanced_brackets && shape_.n % 2 != 0) {
        throw ParameterError("balanced-bracket domain requires even n");
    }
    if (probes_.size() != shape_.n) {
        throw ParameterError("expected " + std::to_string(shape_.n) + " probe sets, got " +
                             std::to_string(probes_.size()));
    }
    if (probes_.universe() > shape_.u) {
        throw RangeError("probe family universe exceeds u = " + std::to_string(shape_.u));
    }
    if (probes_.q() > shape_.q) {
        throw ParameterError("probe set of size " + std::to_string(probes_.q()) +
                             " exceeds q = " + std::to_string(shape_.q));
    }
    if (encoder_table_) {
        for (const auto& [x, cells] : *encoder_table_) {
            if (!in_domain(shape_.domain, shape_.n, x)) {
                throw DomainError("encoder table entry " + x.str() + " outside the domain");
            }
            if (cells.size() != shape_.u) {
                throw ConsistencyError("encoder table entry for " + x.str() + " has " +
                                       std::to_string(cells.size()) + " cells, expected " +
                                       std::to_string(shape_.u));
            }
            for (auto v : cells) {
                if (v >= shape_.cell_alphabet) {
                    throw ConsistencyError("encoder table entry for " + x.str() +
                                           " exceeds cell_alphabet");
                }
            }
        }
    }
    if (decoder_tables_) {
        if (decoder_tables_->size() != shape_.n) {
            throw ParameterError("expected " + std::to_string(shape_.n) + " decoder tables");
        }
        for (std::size_t i = 1; i <= shape_.n; ++i) {
            for (const auto& [key, answer] : (*decoder_tables_)[i - 1]) {
                if (key.size() != probes_.query(i).size()) {
                    throw ConsistencyError("decoder table " + std::to_string(i) +
                                           " key length differs from |Q(i)|");
                }
            }
        }
    }
}

const EncoderTable& Scheme::encoder_table() const {
    if (!encoder_table_) throw ParameterError("scheme encoder is a builtin, not a table");
    return *encoder_table_;
}

const std::vector<DecoderTable>& Scheme::decoder_tables() const {
    if (!decoder_tables_) throw ParameterError("scheme decoders are builtin, not tables");
    return *decoder_tables_;
}

const BuiltinRef& Scheme::encoder_builtin() const {
    if (!encoder_builtin_) throw ParameterError("scheme encoder is a table");
    return *encoder_builtin_;
}

const BuiltinRef& Scheme::decoder_builtin() const {
    if (!decoder_builtin_) throw ParameterError("scheme decoders are tables");
    return *decoder_builtin_;
}

CellValues Scheme::encode(const BitVector& x) const {
    if (!in_domain(shape_.domain, shape_.n, x)) {
        throw DomainError("input " + x.str() + " is outside the scheme domain (" +
                          std::string(to_string(shape_.domain)) + ", n = " +
                          std::to_string(shape_.n) + ")");
    }
    CellValues cells = encode_fn_(x);
    if (cells.size() != shape_.u) {
        throw ConsistencyError("encoder produced " + std::to_string(cells.size()) +
                               " cells, expected " + std::to_string(shape_.u));
    }
    for (auto v : cells) {
        if (v >= shape_.cell_alphabet) {
            throw ConsistencyError("encoder produced cell value " + std::to_string(v) +
                                   " outside [0, " + std::to_string(shape_.cell_alphabet) + ")");
        }
    }
    return cells;
}

std::optional<std::int64_t> Scheme::decode(std::size_t i,
                                           std::span<const std::uint32_t> values) const {
    const auto& q = probes_.query(i);
    if (values.size() != q.size()) {
        throw ParameterError("decoder " + std::to_string(i) + " expects " +
                             std::to_string(q.size()) + " probe values");
    }
    return decode_fn_(i, values);
}

CellValues Scheme::probe_values(const CellValues& cells, std::size_t i) const {
    const auto& q = probes_.query(i);
    CellValues out;
    out.reserve(q.size());
    for (auto c : q) out.push_back(cells[c]);
    return out;
}

Scheme Scheme::with_encoder_table(EncoderTable table) const {
    Scheme s = *this;
    auto enc = std::make_shared<const EncoderTable>(std::move(table));
    s.encoder_table_ = enc;
    s.encoder_builtin_.reset();
    s.encode_fn_ = [enc](const BitVector& x) -> CellValues {
        auto it = enc->find(x);
        if (it == enc->end()) throw DomainError("encoder table has no entry for " + x.str());
        return it->second;
    };
    s.validate();
    return s;
}

Scheme Scheme::with_decoder_tables(std::vector<DecoderTable> tables) const {
    Scheme s = *this;
    auto dec = std::make_shared<const std::vector<DecoderTable>>(std::move(tables));
    s.decoder_tables_ = dec;
    s.decoder_builtin_.reset();
    s.decode_fn_ = [dec](std::size_t i, std::span<const std::uint32_t> values)
        -> std::optional<std::int64_t> {
        const auto& table = (*dec)[i - 1];
        auto it = table.find(CellValues(values.begin(), values.end()));
        if (it == table.end()) return std::nullopt;
        return it->second;
    };
    s.validate();
    return s;
}

Scheme materialize(const Scheme& scheme) {
    EncoderTable enc;
    std::vector<DecoderTable> dec(scheme.n());
    for (const auto& x : domain_inputs(scheme.domain(), scheme.n())) {
        CellValues cells = scheme.encode(x);
        for (std::size_t i = 1; i <= scheme.n(); ++i) {
            CellValues key = scheme.probe_values(cells, i);
            if (auto a = scheme.decode(i, key)) dec[i - 1].emplace(std::move(key), *a);
        }
        enc.emplace(x, std::move(cells));
    }
    return Scheme::from_tables(scheme.shape(), scheme.probes(), std::move(enc), std::move(dec));
}

// ---------------------------------------------------------------------------

std::int64_t answer_query(const Scheme& scheme, const BitVector& x, std::size_t i) {
    if (i < 1 || i > scheme.n()) {
        throw RangeError("query index " + std::to_string(i) + " outside [1, " +
                         std::to_string(scheme.n()) + "]");
    }
    const CellValues cells = scheme.encode(x);
    const CellValues key = scheme.probe_values(cells, i);
    auto a = scheme.decode(i, key);
    if (!a) {
        throw DomainError("decoder d_" + std::to_string(i) + " is undefined on the probe values of " +
                          x.str());
    }
    return *a;
}

QueryOracle prefix_sum_oracle() {
    return [](const BitVector& x, std::size_t i) {
        return static_cast<std::int64_t>(x.prefix_sum(i));
    };
}

QueryOracle match_oracle() {
    return [](const BitVector& x, std::size_t i) {
        return static_cast<std::int64_t>(match_index(x, i));
    };
}

QueryOracle default_oracle(const Scheme& scheme) {
    return scheme.domain() == Domain::all_bitstrings ? prefix_sum_oracle() : match_oracle();
}

VerificationReport verify_scheme(const Scheme& scheme, const QueryOracle& oracle,
                                 const VerifyOptions& options) {
    std::vector<BitVector> inputs;
    if (options.inputs) {
        inputs = *options.inputs;
    } else if (options.sample_size) {
        std::mt19937_64 rng(options.seed);
        if (scheme.domain() == Domain::all_bitstrings) {
            if (scheme.n() > 64) throw SizeError("sampling limited to n <= 64", scheme.n());
            for (std::size_t k = 0; k < *options.sample_size; ++k) {
                BitVector x(scheme.n());
                for (std::size_t b = 0; b < scheme.n(); ++b) x.set(b, rng() & 1U);
                inputs.push_back(std::move(x));
            }
        } else {
            const auto bal = enumerate_bal(scheme.n());
            std::uniform_int_distribution<std::size_t> pick(0, bal.size() - 1);
            for (std::size_t k = 0; k < *options.sample_size; ++k) inputs.push_back(bal[pick(rng)]);
        }
    } else {
        inputs = domain_inputs(scheme.domain(), scheme.n());
    }
    std::sort(inputs.begin(), inputs.end());
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());

    VerificationReport report;
    for (const auto& x : inputs) {
        const CellValues cells = scheme.encode(x);
        for (std::size_t i = 1; i <= scheme.n(); ++i) {
            ++report.checked;
            const std::int64_t expected = oracle(x, i);
            const auto got = scheme.decode(i, scheme.probe_values(cells, i));
            if (!got || *got != expected) {
                report.pass = false;
                report.counterexample = Counterexample{x, i, expected, got};
                return report;
            }
        }
    }
    return report;
}

double redundancy_bits(std::size_t u, std::uint32_t cell_alphabet, const BigInt& domain_size) {
    if (sgn(domain_size) <= 0) throw DomainError("redundancy of an empty domain is undefined");
    return static_cast<double>(u) * std::log2(static_cast<double>(cell_alphabet)) - lg(domain_size);
}

double redundancy(const Scheme& scheme) {
    return redundancy_bits(scheme.u(), scheme.cell_alphabet(),
                           domain_size(scheme.domain(), scheme.n()));
}

// ---------------------------------------------------------------------------

namespace {

ProbeSet normalized_cells(const Scheme& scheme, std::span<const std::uint32_t> cells) {
    ProbeSet b(cells.begin(), cells.end());
    std::sort(b.begin(), b.end());
    if (std::adjacent_find(b.begin(), b.end()) != b.end()) {
        throw ParameterError("fixed cell set contains duplicates");
    }
    if (!b.empty() && b.back() >= scheme.u()) {
        throw RangeError("fixed cell " + std::to_string(b.back()) + " outside [0, " +
                         std::to_string(scheme.u()) + ")");
    }
    return b;
}

}  // namespace

CellFixing most_likely_cell_values(const Scheme& scheme, std::span<const std::uint32_t> cells) {
    CellFixing out;
    out.fixed_cells = normalized_cells(scheme, cells);
    const auto inputs = domain_inputs(scheme.domain(), scheme.n());
    out.domain_size = big(inputs.size());

    std::map<CellValues, std::vector<std::size_t>> groups;
    for (std::size_t k = 0; k < inputs.size(); ++k) {
        const CellValues enc = scheme.encode(inputs[k]);
        CellValues z;
        z.reserve(out.fixed_cells.size());
        for (auto c : out.fixed_cells) z.push_back(enc[c]);
        groups[std::move(z)].push_back(k);
    }
    // std::map iterates z in lexicographic order, so strict '>' keeps the
    // smallest z among equally likely ones.
    const std::vector<std::size_t>* best = nullptr;
    for (const auto& [z, members] : groups) {
        if (best == nullptr || members.size() > best->size()) {
            best = &members;
            out.fixed_values = z;
        }
    }
    if (best != nullptr) {
        out.inputs.reserve(best->size());
        for (auto k : *best) out.inputs.push_back(inputs[k]);
    }
    return out;
}

RestrictedScheme restrict_scheme(const Scheme& scheme, std::span<const std::uint32_t> cells,
                                 std::span<const std::uint32_t> values,
                                 std::vector<BitVector> inputs) {
    if (cells.size() != values.size()) {
        throw ConsistencyError("fixed cells and fixed values differ in length");
    }
    // Sort B and carry z along.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> fixed;
    for (std::size_t k = 0; k < cells.size(); ++k) fixed.emplace_back(cells[k], values[k]);
    std::sort(fixed.begin(), fixed.end());

    RestrictedScheme r;
    r.base_ = std::make_shared<const Scheme>(scheme);
    for (const auto& [c, v] : fixed) {
        r.fixed_cells_.push_back(c);
        r.fixed_values_.push_back(v);
    }
    normalized_cells(scheme, r.fixed_cells_);

    std::sort(inputs.begin(), inputs.end());
    inputs.erase(std::unique(inputs.begin(), inputs.end()), inputs.end());
    for (const auto& x : inputs) {
        const CellValues enc = scheme.encode(x);
        for (std::size_t k = 0; k < r.fixed_cells_.size(); ++k) {
            if (enc[r.fixed_cells_[k]] != r.fixed_values_[k]) {
                throw ConsistencyError("input " + x.str() + " disagrees with z on cell " +
                                       std::to_string(r.fixed_cells_[k]));
            }
        }
    }
    r.inputs_ = std::move(inputs);

    std::vector<long> position(scheme.u(), -1);
    for (std::uint32_t c = 0; c < scheme.u(); ++c) {
        if (!std::binary_search(r.fixed_cells_.begin(), r.fixed_cells_.end(), c)) {
            position[c] = static_cast<long>(r.kept_cells_.size());
            r.kept_cells_.push_back(c);
        }
    }
    std::vector<ProbeSet> reduced;
    reduced.reserve(scheme.n());
    for (const auto& q : scheme.probes().sets()) {
        ProbeSet kept;
        ProbeSet renamed;
        for (auto c : q) {
            if (position[c] >= 0) {
                kept.push_back(c);
                renamed.push_back(static_cast<std::uint32_t>(position[c]));
            }
        }
        reduced.push_back(std::move(kept));
        r.renamed_probes_.push_back(std::move(renamed));
    }
    r.reduced_probes_ = ProbeFamily(std::move(reduced), scheme.u());
    return r;
}

RestrictedScheme restrict_scheme(const Scheme& scheme, const CellFixing& fixing) {
    return restrict_scheme(scheme, fixing.fixed_cells, fixing.fixed_values, fixing.inputs);
}

const ProbeSet& RestrictedScheme::renamed_probe(std::size_t i) const {
    if (i < 1 || i > renamed_probes_.size()) {
        throw RangeError("query index " + std::to_string(i) + " out of range");
    }
    return renamed_probes_[i - 1];
}

bool RestrictedScheme::contains(const BitVector& x) const {
    return std::binary_search(inputs_.begin(), inputs_.end(), x);
}

CellValues RestrictedScheme::reduced_encode(const BitVector& x) const {
    const CellValues enc = base_->encode(x);
    CellValues out;
    out.reserve(kept_cells_.size());
    for (auto c : kept_cells_) out.push_back(enc[c]);
    return out;
}

std::optional<std::int64_t> RestrictedScheme::reduced_decode(
    std::size_t i, std::span<const std::uint32_t> values) const {
    const auto& full = base_->probes().query(i);
    const auto& kept = reduced_probes_.query(i);
    if (values.size() != kept.size()) {
        throw ParameterError("reduced decoder " + std::to_string(i) + " expects " +
                             std::to_string(kept.size()) + " probe values");
    }
    CellValues tuple;
    tuple.reserve(full.size());
    std::size_t next = 0;
    for (auto c : full) {
        auto it = std::lower_bound(fixed_cells_.begin(), fixed_cells_.end(), c);
        if (it != fixed_cells_.end() && *it == c) {
            tuple.push_back(fixed_values_[static_cast<std::size_t>(it - fixed_cells_.begin())]);
        } else {
            tuple.push_back(values[next++]);
        }
    }
    return base_->decode(i, tuple);
}

std::int64_t RestrictedScheme::answer(const BitVector& x, std::size_t i) const {
    if (!contains(x)) throw DomainError("input " + x.str() + " is not in the surviving set X");
    const CellValues enc = reduced_encode(x);
    CellValues key;
    for (auto pos : renamed_probe(i)) key.push_back(enc[pos]);
    auto a = reduced_decode(i, key);
    if (!a) throw DomainError("reduced decoder d'_" + std::to_string(i) + " undefined");
    return *a;
}

}  // namespace cellprobe
