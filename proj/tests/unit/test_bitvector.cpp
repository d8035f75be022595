#include <doctest.h>

#include "cellprobe/bitvector.hpp"
#include "cellprobe/errors.hpp"

using namespace cellprobe;

TEST_SUITE("bitvector") {
    TEST_CASE("parse and positions") {
        const auto x = BitVector::parse("1011");
        CHECK(x.size() == 4);
        CHECK(x.at(1) == 1);
        CHECK(x.at(2) == 0);
        CHECK(x[3] == 1);
        CHECK(x.str() == "1011");
        CHECK(x.prefix_sum(0) == 0);
        CHECK(x.prefix_sum(3) == 2);
        CHECK(x.popcount() == 3);
    }

    TEST_CASE("codes are lexicographic with x_1 most significant") {
        CHECK(BitVector::from_code(0b1000, 4).str() == "1000");
        CHECK(BitVector::parse("0110").code() == 6);
        const auto all = all_bitstrings(3);
        REQUIRE(all.size() == 8);
        for (std::size_t k = 1; k < all.size(); ++k) CHECK(all[k - 1] < all[k]);
        CHECK(all.front().str() == "000");
        CHECK(all.back().str() == "111");
    }

    TEST_CASE("rejects bad characters") {
        CHECK_THROWS(BitVector::parse("10a1"));
        CHECK_THROWS(BitVector::parse("1 0"));
    }
}
