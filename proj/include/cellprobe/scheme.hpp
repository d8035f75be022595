#pragma once

// Non-adaptive cell-probe schemes: an encoder Enc mapping each input of the
// domain to u cells over [cell_alphabet], fixed probe sets Q(1..n), and
// decoders d_i that answer query i from the cells indexed by Q(i) alone.
//
// Queries are 1-indexed (i in [1, n]); cell indices are 0-indexed.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cellprobe/bitvector.hpp"
#include "cellprobe/rational.hpp"

namespace cellprobe {

enum class Domain { all_bitstrings, balanced_brackets };

std::string_view to_string(Domain d);
Domain parse_domain(std::string_view text);

// Lexicographically ordered domain elements of length n.
std::vector<BitVector> domain_inputs(Domain d, std::size_t n);
BigInt domain_size(Domain d, std::size_t n);
bool in_domain(Domain d, std::size_t n, const BitVector& x);

using CellValues = std::vector<std::uint32_t>;
// Sorted, duplicate-free cell indices.
using ProbeSet = std::vector<std::uint32_t>;

// Q(1), ..., Q(n) over the cell universe [0, u).
class ProbeFamily {
public:
    ProbeFamily() = default;
    // Sorts and de-duplicates each set; throws RangeError for indices >= universe.
    ProbeFamily(std::vector<ProbeSet> sets, std::size_t universe);
    // Universe taken as one past the largest index.
    explicit ProbeFamily(std::vector<ProbeSet> sets);

    std::size_t size() const noexcept { return sets_.size(); }
    std::size_t universe() const noexcept { return universe_; }
    // Largest set size.
    std::size_t q() const noexcept { return q_; }
    // Q(i), 1 <= i <= size().
    const ProbeSet& query(std::size_t i) const;
    const std::vector<ProbeSet>& sets() const noexcept { return sets_; }

    bool operator==(const ProbeFamily&) const = default;

private:
    std::vector<ProbeSet> sets_;
    std::size_t universe_ = 0;
    std::size_t q_ = 0;
};

// A formula-driven encoder or decoder family, named so it can be written
// to and re-read from scheme files.
struct BuiltinRef {
    std::string name;
    std::map<std::string, std::int64_t> params;
    bool operator==(const BuiltinRef&) const = default;
};

using EncoderTable = std::map<BitVector, CellValues>;
// Probe-value tuple (in Q(i) order) -> answer.
using DecoderTable = std::map<CellValues, std::int64_t>;

using EncodeFn = std::function<CellValues(const BitVector&)>;
// nullopt when the decoder is undefined on the given probe values.
using DecodeFn =
    std::function<std::optional<std::int64_t>(std::size_t query, std::span<const std::uint32_t>)>;

struct SchemeShape {
    std::size_t n = 0;
    std::size_t u = 0;
    std::size_t q = 0;
    std::uint32_t cell_alphabet = 2;
    Domain domain = Domain::all_bitstrings;
    bool operator==(const SchemeShape&) const = default;
};

class Scheme {
public:
    static Scheme from_tables(SchemeShape shape, ProbeFamily probes, EncoderTable encoder,
                              std::vector<DecoderTable> decoders);
    static Scheme from_builtin(SchemeShape shape, ProbeFamily probes, BuiltinRef encoder_ref,
                               EncodeFn encoder, BuiltinRef decoder_ref, DecodeFn decoder);

    const SchemeShape& shape() const noexcept { return shape_; }
    std::size_t n() const noexcept { return shape_.n; }
    std::size_t u() const noexcept { return shape_.u; }
    std::size_t q() const noexcept { return shape_.q; }
    std::uint32_t cell_alphabet() const noexcept { return shape_.cell_alphabet; }
    Domain domain() const noexcept { return shape_.domain; }
    const ProbeFamily& probes() const noexcept { return probes_; }

    bool encoder_is_table() const noexcept { return encoder_table_ != nullptr; }
    bool decoders_are_tables() const noexcept { return decoder_tables_ != nullptr; }
    const EncoderTable& encoder_table() const;
    const std::vector<DecoderTable>& decoder_tables() const;
    const BuiltinRef& encoder_builtin() const;
    const BuiltinRef& decoder_builtin() const;

    // Enc(x); throws DomainError for x outside the domain and FormatError
    // if the encoder violates the length / alphabet contract.
    CellValues encode(const BitVector& x) const;
    // d_i on the probe-value tuple (ordered as Q(i)).
    std::optional<std::int64_t> decode(std::size_t i, std::span<const std::uint32_t> values) const;
    // Enc(x)|_{Q(i)}.
    CellValues probe_values(const CellValues& cells, std::size_t i) const;

    Scheme with_encoder_table(EncoderTable table) const;
    Scheme with_decoder_tables(std::vector<DecoderTable> tables) const;

private:
    Scheme() = default;
    void validate() const;

    SchemeShape shape_;
    ProbeFamily probes_;
    std::shared_ptr<const EncoderTable> encoder_table_;
    std::optional<BuiltinRef> encoder_builtin_;
    EncodeFn encode_fn_;
    std::shared_ptr<const std::vector<DecoderTable>> decoder_tables_;
    std::optional<BuiltinRef> decoder_builtin_;
    DecodeFn decode_fn_;
};

// Replaces builtin encoder/decoders by explicit tables built by enumerating
// the domain. The result answers identically on the domain.
Scheme materialize(const Scheme& scheme);

// d_i(Enc(x)|_{Q(i)}).
std::int64_t answer_query(const Scheme& scheme, const BitVector& x, std::size_t i);

using QueryOracle = std::function<std::int64_t(const BitVector&, std::size_t)>;

// Sum(i) = x_1 + ... + x_i.
QueryOracle prefix_sum_oracle();
// Match(i) on balanced strings.
QueryOracle match_oracle();
// prefix_sum_oracle for all_bitstrings, match_oracle for balanced_brackets.
QueryOracle default_oracle(const Scheme& scheme);

struct Counterexample {
    BitVector x;
    std::size_t i = 0;
    std::int64_t expected = 0;
    std::optional<std::int64_t> got;  // nullopt: decoder undefined
};

struct VerificationReport {
    bool pass = true;
    std::uint64_t checked = 0;  // (x, i) pairs compared
    std::optional<Counterexample> counterexample;
};

struct VerifyOptions {
    // Checked instead of the domain when set.
    std::optional<std::vector<BitVector>> inputs;
    // Uniform sample of the domain (with replacement) instead of enumeration.
    std::optional<std::size_t> sample_size;
    std::uint64_t seed = 0;
};

// Compares every (x, i) in lexicographic order and stops at the first
// disagreement, which is therefore the lexicographically first one.
VerificationReport verify_scheme(const Scheme& scheme, const QueryOracle& oracle,
                                 const VerifyOptions& options = {});

// u * lg(cell_alphabet) - lg(domain_size), in bits.
double redundancy_bits(std::size_t u, std::uint32_t cell_alphabet, const BigInt& domain_size);
double redundancy(const Scheme& scheme);

struct CellFixing {
    ProbeSet fixed_cells;           // B, sorted
    CellValues fixed_values;        // z, aligned with fixed_cells
    std::vector<BitVector> inputs;  // X = {x : Enc(x)|_B = z}, lexicographic
    BigInt domain_size;
};

// Most likely assignment z to the cells in B over a uniform domain element;
// ties go to the lexicographically smallest z.
CellFixing most_likely_cell_values(const Scheme& scheme, std::span<const std::uint32_t> cells);

// The scheme with the cells of B fixed to z, decoding the surviving inputs
// X from the remaining u' = u - |B| cells.
class RestrictedScheme {
public:
    const Scheme& base() const noexcept { return *base_; }
    const ProbeSet& fixed_cells() const noexcept { return fixed_cells_; }
    const CellValues& fixed_values() const noexcept { return fixed_values_; }
    const std::vector<BitVector>& surviving_inputs() const noexcept { return inputs_; }
    // [u] \ B in ascending order; position k of Enc'(x) is cell kept_cells()[k].
    const ProbeSet& kept_cells() const noexcept { return kept_cells_; }
    std::size_t reduced_cell_count() const noexcept { return kept_cells_.size(); }
    // Q'(i) = Q(i) \ B in original cell indices.
    const ProbeFamily& reduced_probes() const noexcept { return reduced_probes_; }
    // Q'(i) as positions of Enc'(x).
    const ProbeSet& renamed_probe(std::size_t i) const;

    bool contains(const BitVector& x) const;
    // Enc'(x): Enc(x) restricted to the kept cells.
    CellValues reduced_encode(const BitVector& x) const;
    // d'_i: d_i with the probes into B hardwired to z. `values` are ordered as Q'(i).
    std::optional<std::int64_t> reduced_decode(std::size_t i,
                                               std::span<const std::uint32_t> values) const;
    // d'_i(Enc'(x)|_{Q'(i)}) for x in X.
    std::int64_t answer(const BitVector& x, std::size_t i) const;

private:
    friend RestrictedScheme restrict_scheme(const Scheme&, std::span<const std::uint32_t>,
                                            std::span<const std::uint32_t>,
                                            std::vector<BitVector>);
    std::shared_ptr<const Scheme> base_;
    ProbeSet fixed_cells_;
    CellValues fixed_values_;
    std::vector<BitVector> inputs_;
    ProbeSet kept_cells_;
    ProbeFamily reduced_probes_;
    std::vector<ProbeSet> renamed_probes_;
};

// Throws ConsistencyError when some x in X has Enc(x)|_B != z.
RestrictedScheme restrict_scheme(const Scheme& scheme, std::span<const std::uint32_t> cells,
                                 std::span<const std::uint32_t> values,
                                 std::vector<BitVector> inputs);
RestrictedScheme restrict_scheme(const Scheme& scheme, const CellFixing& fixing);

}  // namespace cellprobe
