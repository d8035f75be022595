#include <doctest.h>

#include "cellprobe/errors.hpp"
#include "cellprobe/reference_schemes.hpp"

using namespace cellprobe;

TEST_SUITE("reference_schemes") {
    TEST_CASE("precomputed sums") {
        const auto s = build_precomputed_sums(4, 5);
        CHECK(s.encode(BitVector::parse("1011")) == CellValues{1, 1, 2, 3});
        CHECK(build_precomputed_sums(1, 2).encode(BitVector::parse("1")) == CellValues{1});
        CHECK(s.q() == 1);
        CHECK(s.u() == 4);
        CHECK(redundancy(build_precomputed_sums(4, 8)) == doctest::Approx(8.0));
        CHECK_THROWS_AS(build_precomputed_sums(4, 4), CapacityError);
    }

    TEST_CASE("two-level rank") {
        const auto s = build_two_level_rank(16, 4, 16, 17);
        CHECK(answer_query(s, BitVector::parse("1111111111111111"), 7) == 7);
        for (std::size_t i = 1; i <= 16; ++i) CHECK(s.probes().query(i).size() == 3);
        CHECK(verify_scheme(s, prefix_sum_oracle()).pass);
        CHECK_THROWS_AS(build_two_level_rank(16, 3, 16, 17), ParameterError);
        CHECK_THROWS_AS(build_two_level_rank(16, 4, 8, 4), ParameterError);
    }

    TEST_CASE("two-level redundancy falls as superblocks grow") {
        const double r4 = redundancy(build_two_level_rank(16, 2, 4, 17));
        const double r8 = redundancy(build_two_level_rank(16, 2, 8, 17));
        const double r16 = redundancy(build_two_level_rank(16, 2, 16, 17));
        CHECK(r4 > r8);
        CHECK(r8 > r16);
    }

    TEST_CASE("raw identity") {
        const auto s = build_raw_identity(8, 16);
        CHECK(s.u() == 2);
        CHECK(s.probes().query(3) == ProbeSet{0});
        CHECK(s.q() == 2);
        CHECK(redundancy(s) == doctest::Approx(0.0));
        CHECK(verify_scheme(s, prefix_sum_oracle()).pass);
        CHECK_THROWS_AS(build_raw_identity(8, 6), ParameterError);
    }

    TEST_CASE("bracket table") {
        CHECK(build_bracket_table(2, 3).encode(BitVector::parse("10")) == CellValues{2, 1});
        const auto s = build_bracket_table(4, 5);
        CHECK(s.encode(BitVector::parse("1100")) == CellValues{4, 3, 2, 1});
        CHECK(s.encode(BitVector::parse("1010")) == CellValues{2, 1, 4, 3});
        CHECK_THROWS_AS(build_bracket_table(5, 6), ParameterError);
    }

    TEST_CASE("every builder verifies up to n = 12") {
        for (std::size_t n = 2; n <= 12; n += 2) {
            CHECK(verify_scheme(build_precomputed_sums(n, n + 1), prefix_sum_oracle()).pass);
            CHECK(verify_scheme(build_raw_identity(n, 4), prefix_sum_oracle()).pass);
            CHECK(verify_scheme(build_bracket_table(n, n + 1), match_oracle()).pass);
        }
    }
}
