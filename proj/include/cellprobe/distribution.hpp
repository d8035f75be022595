#pragma once

// Explicit probability mass functions over small product spaces
// [m_1] x ... x [m_k]. Probabilities are exact: element t has probability
// weight(t) / total().

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "cellprobe/bitvector.hpp"
#include "cellprobe/rational.hpp"

namespace cellprobe {

using Tuple = std::vector<std::uint32_t>;

class Distribution {
public:
    Distribution() = default;
    // Merges repeated tuples, drops zero weights, sorts the support.
    // Throws DomainError on an empty support or a value outside its alphabet.
    Distribution(std::vector<std::uint32_t> alphabets,
                 std::vector<std::pair<Tuple, std::uint64_t>> weighted);

    // Uniform over the given (de-duplicated) tuples.
    static Distribution uniform(std::vector<std::uint32_t> alphabets, std::vector<Tuple> support);
    // Uniform over a set of equal-length bit strings.
    static Distribution uniform_bits(const std::vector<BitVector>& inputs);
    // Uniform over the whole product space; limited to 2^24 elements.
    static Distribution uniform_product(std::vector<std::uint32_t> alphabets);

    std::size_t arity() const noexcept { return alphabets_.size(); }
    const std::vector<std::uint32_t>& alphabets() const noexcept { return alphabets_; }
    std::size_t support_size() const noexcept { return tuples_.size(); }
    const std::vector<Tuple>& tuples() const noexcept { return tuples_; }
    const std::vector<std::uint64_t>& weights() const noexcept { return weights_; }
    std::uint64_t total() const noexcept { return total_; }

    Rational probability(const Tuple& t) const;
    Rational probability_at(std::size_t k) const;
    // |[m_1] x ... x [m_k]|.
    BigInt space_size() const;
    bool is_uniform_on_support() const;

    // Distribution of the listed coordinates (0-based, in the given order).
    Distribution marginal(std::span<const std::size_t> coords) const;

    bool operator==(const Distribution&) const = default;

private:
    std::vector<std::uint32_t> alphabets_;
    std::vector<Tuple> tuples_;
    std::vector<std::uint64_t> weights_;
    std::uint64_t total_ = 0;
};

// Distribution files: '#' comments, an optional "alphabet: m" or
// "alphabet: m_1 m_2 ..." header, then one "tuple probability" line per
// support element. Tuples are bit strings ("0110") or comma lists ("0,3,1");
// probabilities are fractions ("3/8") or decimals ("0.375"). Without a header,
// bit strings get alphabet 2 and comma lists get 1 + the largest value seen
// per coordinate (at least 2). Probabilities must sum to 1 within 1e-12 and
// are renormalised exactly.
Distribution read_distribution(std::istream& in);
Distribution read_distribution_file(const std::filesystem::path& path);
void write_distribution(std::ostream& out, const Distribution& dist);

}  // namespace cellprobe
