#include "cellprobe/reference_schemes.hpp"

#include <bit>

#include "cellprobe/brackets.hpp"
#include "cellprobe/errors.hpp"

namespace cellprobe {

std::string_view to_string(SchemeVariant v) {
    switch (v) {
        case SchemeVariant::precomputed_sums: return "precomputed_sums";
        case SchemeVariant::two_level_rank: return "two_level_rank";
        case SchemeVariant::raw_identity: return "raw_identity";
        case SchemeVariant::bracket_table: return "bracket_table";
    }
    return "unknown";
}

SchemeVariant parse_variant(std::string_view text) {
    for (auto v : {SchemeVariant::precomputed_sums, SchemeVariant::two_level_rank,
                   SchemeVariant::raw_identity, SchemeVariant::bracket_table}) {
        if (to_string(v) == text) return v;
    }
    throw FormatError("unknown builtin scheme '" + std::string(text) + "'");
}

namespace {

void require_capacity(std::uint32_t cell_alphabet, std::uint64_t needed, const char* what) {
    if (cell_alphabet < needed) {
        throw CapacityError(std::string("cell_alphabet ") + std::to_string(cell_alphabet) +
                            " cannot hold " + what + " (needs >= " + std::to_string(needed) + ")");
    }
}

std::vector<ProbeSet> singleton_probes(std::size_t n) {
    std::vector<ProbeSet> sets(n);
    for (std::size_t i = 0; i < n; ++i) sets[i] = {static_cast<std::uint32_t>(i)};
    return sets;
}

DecodeFn stored_value_decoder() {
    return [](std::size_t, std::span<const std::uint32_t> v) -> std::optional<std::int64_t> {
        return static_cast<std::int64_t>(v[0]);
    };
}

}  // namespace

Scheme build_precomputed_sums(std::size_t n, std::uint32_t cell_alphabet) {
    if (n < 1) throw ParameterError("precomputed_sums requires n >= 1");
    require_capacity(cell_alphabet, std::uint64_t{n} + 1, "prefix sums 0..n");
    SchemeShape shape{n, n, 1, cell_alphabet, Domain::all_bitstrings};
    auto encode = [n](const BitVector& x) {
        CellValues cells(n);
        std::uint32_t running = 0;
        for (std::size_t k = 0; k < n; ++k) {
            running += x[k];
            cells[k] = running;
        }
        return cells;
    };
    BuiltinRef ref{"precomputed_sums", {}};
    return Scheme::from_builtin(shape, ProbeFamily(singleton_probes(n), n), ref, encode, ref,
                                stored_value_decoder());
}

Scheme build_two_level_rank(std::size_t n, std::size_t block, std::size_t superblock,
                            std::uint32_t cell_alphabet) {
    if (n < 1 || block < 1 || superblock < 1) {
        throw ParameterError("two_level_rank requires n, block, superblock >= 1");
    }
    if (superblock % block != 0) throw ParameterError("block must divide superblock");
    if (n % superblock != 0) throw ParameterError("superblock must divide n");
    if (block > 31) throw CapacityError("block of more than 31 bits cannot be packed in a cell");
    require_capacity(cell_alphabet, std::uint64_t{n} + 1, "superblock prefix sums 0..n");
    require_capacity(cell_alphabet, std::uint64_t{1} << block, "a raw block");

    const std::size_t blocks = n / block;
    const std::size_t superblocks = n / superblock;
    const std::size_t u = 2 * blocks + superblocks;
    const std::size_t per_super = superblock / block;

    std::vector<ProbeSet> sets(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t b = (i - 1) / block;
        const std::size_t k = (i - 1) / superblock;
        sets[i - 1] = {static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(blocks + b),
                       static_cast<std::uint32_t>(2 * blocks + k)};
    }

    auto encode = [=](const BitVector& x) {
        CellValues cells(u, 0);
        std::vector<std::uint32_t> block_ones(blocks, 0);
        for (std::size_t b = 0; b < blocks; ++b) {
            std::uint32_t raw = 0;
            for (std::size_t r = 0; r < block; ++r) {
                if (x[b * block + r]) {
                    raw |= std::uint32_t{1} << r;
                    ++block_ones[b];
                }
            }
            cells[b] = raw;
        }
        std::uint32_t cumulative = 0;
        for (std::size_t k = 0; k < superblocks; ++k) {
            std::uint32_t after = 0;
            for (std::size_t j = per_super; j-- > 0;) {
                const std::size_t b = k * per_super + j;
                cells[blocks + b] = after;
                after += block_ones[b];
            }
            cumulative += after;
            cells[2 * blocks + k] = cumulative;
        }
        return cells;
    };
    auto decode = [block](std::size_t i, std::span<const std::uint32_t> v)
        -> std::optional<std::int64_t> {
        const std::size_t offset = (i - 1) % block;
        const std::uint32_t mask = block >= 32 ? ~0U : ((std::uint32_t{1} << block) - 1);
        const std::uint32_t tail = (v[0] & mask) >> (offset + 1);
        return static_cast<std::int64_t>(v[2]) - static_cast<std::int64_t>(v[1]) -
               static_cast<std::int64_t>(std::popcount(tail));
    };
    BuiltinRef ref{"two_level_rank",
                   {{"block", static_cast<std::int64_t>(block)},
                    {"superblock", static_cast<std::int64_t>(superblock)}}};
    SchemeShape shape{n, u, 3, cell_alphabet, Domain::all_bitstrings};
    return Scheme::from_builtin(shape, ProbeFamily(std::move(sets), u), ref, encode, ref, decode);
}

Scheme build_raw_identity(std::size_t n, std::uint32_t cell_alphabet) {
    if (n < 1) throw ParameterError("raw_identity requires n >= 1");
    if (cell_alphabet < 2 || !std::has_single_bit(cell_alphabet)) {
        throw ParameterError("raw_identity requires a power-of-two cell_alphabet");
    }
    const std::size_t bits = static_cast<std::size_t>(std::countr_zero(cell_alphabet));
    const std::size_t u = (n + bits - 1) / bits;

    std::vector<ProbeSet> sets(n);
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t cover = (i + bits - 1) / bits;
        for (std::size_t c = 0; c < cover; ++c) sets[i - 1].push_back(static_cast<std::uint32_t>(c));
    }
    auto encode = [=](const BitVector& x) {
        CellValues cells(u, 0);
        for (std::size_t k = 0; k < n; ++k) {
            if (x[k]) cells[k / bits] |= std::uint32_t{1} << (k % bits);
        }
        return cells;
    };
    auto decode = [bits](std::size_t i, std::span<const std::uint32_t> v)
        -> std::optional<std::int64_t> {
        std::int64_t sum = 0;
        for (std::size_t c = 0; c < v.size(); ++c) {
            const std::size_t first = c * bits;
            const std::size_t take = std::min(bits, i - first);
            const std::uint32_t mask = take >= 32 ? ~0U : ((std::uint32_t{1} << take) - 1);
            sum += std::popcount(v[c] & mask);
        }
        return sum;
    };
    BuiltinRef ref{"raw_identity", {}};
    SchemeShape shape{n, u, u, cell_alphabet, Domain::all_bitstrings};
    return Scheme::from_builtin(shape, ProbeFamily(std::move(sets), u), ref, encode, ref, decode);
}

Scheme build_bracket_table(std::size_t n, std::uint32_t cell_alphabet) {
    if (n < 2 || n % 2 != 0) throw ParameterError("bracket_table requires even n >= 2");
    require_capacity(cell_alphabet, std::uint64_t{n} + 1, "match indices 1..n");
    auto encode = [n](const BitVector& x) {
        const auto partner = match_partners(x);
        CellValues cells(n);
        for (std::size_t k = 0; k < n; ++k) cells[k] = static_cast<std::uint32_t>(partner[k]);
        return cells;
    };
    BuiltinRef ref{"bracket_table", {}};
    SchemeShape shape{n, n, 1, cell_alphabet, Domain::balanced_brackets};
    return Scheme::from_builtin(shape, ProbeFamily(singleton_probes(n), n), ref, encode, ref,
                                stored_value_decoder());
}

Scheme build_reference(const SchemeSpecParams& p) {
    switch (p.variant) {
        case SchemeVariant::precomputed_sums: return build_precomputed_sums(p.n, p.cell_alphabet);
        case SchemeVariant::two_level_rank:
            return build_two_level_rank(p.n, p.block, p.superblock, p.cell_alphabet);
        case SchemeVariant::raw_identity: return build_raw_identity(p.n, p.cell_alphabet);
        case SchemeVariant::bracket_table: return build_bracket_table(p.n, p.cell_alphabet);
    }
    throw ParameterError("unknown scheme variant");
}

BuiltinRef builtin_ref(const SchemeSpecParams& p) {
    BuiltinRef ref{std::string(to_string(p.variant)), {}};
    if (p.variant == SchemeVariant::two_level_rank) {
        ref.params["block"] = static_cast<std::int64_t>(p.block);
        ref.params["superblock"] = static_cast<std::int64_t>(p.superblock);
    }
    return ref;
}

SchemeSpecParams params_from_builtin(const BuiltinRef& ref, std::size_t n,
                                     std::uint32_t cell_alphabet) {
    SchemeSpecParams p;
    p.variant = parse_variant(ref.name);
    p.n = n;
    p.cell_alphabet = cell_alphabet;
    for (const auto& [key, value] : ref.params) {
        if (p.variant != SchemeVariant::two_level_rank || (key != "block" && key != "superblock")) {
            throw FormatError("builtin:" + ref.name + " does not take parameter '" + key + "'");
        }
        if (value < 1) throw FormatError("builtin parameter '" + key + "' must be >= 1");
        (key == "block" ? p.block : p.superblock) = static_cast<std::size_t>(value);
    }
    if (p.variant == SchemeVariant::two_level_rank && (p.block == 0 || p.superblock == 0)) {
        throw FormatError("builtin:two_level_rank needs block= and superblock=");
    }
    return p;
}

}  // namespace cellprobe
