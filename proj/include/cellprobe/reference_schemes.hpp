#pragma once

// Correct-by-construction schemes with known redundancy/probe tradeoffs,
// used as subjects for verification and for the adversary pipeline.

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "cellprobe/scheme.hpp"

namespace cellprobe {

enum class SchemeVariant { precomputed_sums, two_level_rank, raw_identity, bracket_table };

std::string_view to_string(SchemeVariant v);
SchemeVariant parse_variant(std::string_view text);

struct SchemeSpecParams {
    SchemeVariant variant = SchemeVariant::precomputed_sums;
    std::size_t n = 0;
    std::uint32_t cell_alphabet = 0;
    std::size_t block = 0;       // two_level_rank only
    std::size_t superblock = 0;  // two_level_rank only
};

// u = n cells, cell i-1 stores Sum(i); Q(i) = {i-1}. Needs cell_alphabet > n.
Scheme build_precomputed_sums(std::size_t n, std::uint32_t cell_alphabet);

// Cells, in index order:
//   [0, n/block)            raw bits of each block, x at block offset r -> bit r
//   [n/block, 2n/block)     ones in the block's superblock after the block
//   [2n/block, u)           ones in x_1 .. end of each superblock (inclusive)
// Q(i) = {raw(b), suffix(b), superblock(k)} and
//   Sum(i) = superblock(k) - suffix(b) - ones in block b after x_i.
Scheme build_two_level_rank(std::size_t n, std::size_t block, std::size_t superblock,
                            std::uint32_t cell_alphabet);

// x packed raw into ceil(n / lg m) cells of lg m bits; Q(i) covers only the
// cells holding x_1..x_i. Needs cell_alphabet a power of two.
Scheme build_raw_identity(std::size_t n, std::uint32_t cell_alphabet);

// Over Bal(n): cell i-1 stores Match(i) (1-indexed); Q(i) = {i-1}.
Scheme build_bracket_table(std::size_t n, std::uint32_t cell_alphabet);

Scheme build_reference(const SchemeSpecParams& params);

// The BuiltinRef written for `params` (name = variant, block/superblock when used).
BuiltinRef builtin_ref(const SchemeSpecParams& params);
// Inverse of builtin_ref given the header fields of a scheme file.
SchemeSpecParams params_from_builtin(const BuiltinRef& ref, std::size_t n,
                                     std::uint32_t cell_alphabet);

}  // namespace cellprobe
