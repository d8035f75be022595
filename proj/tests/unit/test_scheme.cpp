#include <doctest.h>

#include <cmath>
#include <numeric>

#include "cellprobe/brackets.hpp"
#include "cellprobe/errors.hpp"
#include "cellprobe/reference_schemes.hpp"
#include "cellprobe/scheme.hpp"

using namespace cellprobe;

TEST_SUITE("scheme") {
    TEST_CASE("answer_query examples") {
        const auto s = build_precomputed_sums(4, 5);
        for (std::size_t i = 1; i <= 4; ++i) CHECK(answer_query(s, BitVector::parse("0000"), i) == 0);
        CHECK(answer_query(s, BitVector::parse("1011"), 3) == 2);
        const auto two = build_two_level_rank(16, 4, 16, 17);
        CHECK(answer_query(two, BitVector::parse("1111111111111111"), 16) == 16);
        CHECK_THROWS_AS(answer_query(s, BitVector::parse("101"), 1), DomainError);
        CHECK_THROWS_AS(answer_query(s, BitVector::parse("1011"), 5), RangeError);
        CHECK_THROWS_AS(answer_query(s, BitVector::parse("1011"), 0), RangeError);
    }

    TEST_CASE("verify_scheme passes and reports corrupted decoders") {
        const auto s = build_precomputed_sums(8, 9);
        const auto ok = verify_scheme(s, prefix_sum_oracle());
        CHECK(ok.pass);
        CHECK(ok.checked == 256 * 8);

        auto tables = materialize(s).decoder_tables();
        for (auto& [values, answer] : tables[1]) answer = 0;
        const auto bad = materialize(s).with_decoder_tables(tables);
        VerifyOptions opt;
        opt.inputs = std::vector<BitVector>{BitVector::parse("11000000")};
        const auto r = verify_scheme(bad, prefix_sum_oracle(), opt);
        CHECK_FALSE(r.pass);
        REQUIRE(r.counterexample);
        CHECK(r.counterexample->x.str() == "11000000");
        CHECK(r.counterexample->i == 2);
        CHECK(r.counterexample->expected == 2);

        // Over the whole domain the first failure is lexicographically first.
        const auto all = verify_scheme(bad, prefix_sum_oracle());
        REQUIRE(all.counterexample);
        CHECK(all.counterexample->x.str() == "01000000");
        CHECK(all.counterexample->i == 2);
    }

    TEST_CASE("bracket table against the match oracle") {
        const auto s = build_bracket_table(6, 7);
        const auto r = verify_scheme(s, match_oracle());
        CHECK(r.pass);
        CHECK(r.checked == 5 * 6);
    }

    TEST_CASE("redundancy") {
        // u = 4 cells over alphabet 4 for 2^4 inputs.
        CHECK(redundancy_bits(4, 4, BigInt(16)) == doctest::Approx(4.0));
        CHECK(redundancy(build_raw_identity(16, 16)) == doctest::Approx(0.0));
        const auto b = build_bracket_table(4, 5);
        CHECK(redundancy(b) == doctest::Approx(4 * std::log2(5.0) - 1.0));
        CHECK(redundancy(build_precomputed_sums(4, 8)) == doctest::Approx(8.0));
    }

    TEST_CASE("most likely cell values") {
        const auto id = build_raw_identity(4, 2);
        const auto none = most_likely_cell_values(id, ProbeSet{});
        CHECK(none.fixed_values.empty());
        CHECK(none.inputs.size() == 16);

        const auto one = most_likely_cell_values(id, ProbeSet{0});
        CHECK(one.inputs.size() == 8);
        REQUIRE(one.fixed_values.size() == 1);
        CHECK(one.fixed_values[0] == 0);

        // Modal superblock sum is 8 with C(16,8) preimages.
        const auto two = build_two_level_rank(16, 4, 16, 17);
        const std::uint32_t super_cell = static_cast<std::uint32_t>(two.u() - 1);
        const auto f = most_likely_cell_values(two, ProbeSet{super_cell});
        CHECK(f.fixed_values.at(0) == 8);
        CHECK(f.inputs.size() == 12870);
        CHECK(BigInt(12870) * 17 >= pow2(16));
    }

    TEST_CASE("restriction") {
        const auto id = build_raw_identity(4, 2);
        std::vector<BitVector> xs;
        for (const auto& x : all_bitstrings(4)) if (x.at(1) == 1) xs.push_back(x);
        const ProbeSet cells{0};
        const CellValues z{1};
        const auto r = restrict_scheme(id, cells, z, xs);
        CHECK(r.reduced_probes().query(1).empty());
        CHECK(r.answer(BitVector::parse("1000"), 1) == 1);
        CHECK(r.reduced_cell_count() == 3);

        // Inconsistent fixing.
        std::vector<BitVector> wrong{BitVector::parse("0000")};
        CHECK_THROWS_AS(restrict_scheme(id, cells, z, wrong), ConsistencyError);

        // Empty restriction equals the base scheme.
        const auto empty = restrict_scheme(id, most_likely_cell_values(id, ProbeSet{}));
        for (const auto& x : all_bitstrings(4))
            for (std::size_t i = 1; i <= 4; ++i) CHECK(empty.answer(x, i) == answer_query(id, x, i));

        // Full fixing: every reduced probe set is empty, answers still agree on X.
        const auto two = build_two_level_rank(8, 2, 4, 9);
        ProbeSet all(two.u());
        std::iota(all.begin(), all.end(), 0u);
        const auto full = restrict_scheme(two, most_likely_cell_values(two, all));
        for (std::size_t i = 1; i <= 8; ++i) CHECK(full.reduced_probes().query(i).empty());
        for (const auto& x : full.surviving_inputs())
            for (std::size_t i = 1; i <= 8; ++i) CHECK(full.answer(x, i) == answer_query(two, x, i));
    }

    TEST_CASE("restriction over brackets") {
        const auto s = build_bracket_table(8, 9);
        const auto f = most_likely_cell_values(s, ProbeSet{0, 3});
        CHECK(BigInt(std::to_string(f.inputs.size())) * 81 >= catalan_count(8));
        const auto r = restrict_scheme(s, f);
        for (const auto& x : r.surviving_inputs())
            for (std::size_t i = 1; i <= 8; ++i) CHECK(r.answer(x, i) == match_index(x, i));
    }
}
