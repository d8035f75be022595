#include <doctest.h>

#include <cmath>

#include "cellprobe/brackets.hpp"
#include "cellprobe/errors.hpp"

using namespace cellprobe;

namespace {

// Independent oracle: scan code bits directly.
bool naive_balanced(std::uint64_t code, std::size_t n) {
    long depth = 0;
    for (std::size_t k = 0; k < n; ++k) {
        depth += ((code >> (n - 1 - k)) & 1) ? 1 : -1;
        if (depth < 0) return false;
    }
    return depth == 0;
}

// (1/2) Pr[a +-1 walk of length d-1 from 0 never goes below 0].
Rational walk_oracle(std::size_t d) {
    const std::size_t len = d - 1;
    std::uint64_t good = 0;
    for (std::uint64_t code = 0; code < (1ULL << len); ++code) {
        long level = 0;
        bool ok = true;
        for (std::size_t k = 0; k < len && ok; ++k) {
            level += ((code >> k) & 1) ? 1 : -1;
            ok = level >= 0;
        }
        good += ok;
    }
    return Rational(BigInt(std::to_string(good))) / (Rational(pow2(len)) * 2);
}

}  // namespace

TEST_SUITE("brackets") {
    TEST_CASE("is_balanced") {
        CHECK(is_balanced(parse_brackets("()")));
        CHECK_FALSE(is_balanced(parse_brackets(")(")));
        CHECK_FALSE(is_balanced(parse_brackets("(()")));
        CHECK(is_balanced(BitVector()));
        CHECK(parse_brackets("10") == parse_brackets("()"));
    }

    TEST_CASE("match_index examples") {
        CHECK(match_index(parse_brackets("()"), 1) == 2);
        CHECK(match_index(parse_brackets("(())"), 1) == 4);
        CHECK(match_index(parse_brackets("(())"), 2) == 3);
        CHECK(match_index(parse_brackets("()()"), 3) == 4);
        CHECK_THROWS_AS(match_index(parse_brackets("(("), 1), DomainError);
    }

    TEST_CASE("match is a fixed-point-free involution, opens map right") {
        for (const auto& x : enumerate_bal(10)) {
            for (std::size_t i = 1; i <= 10; ++i) {
                const auto j = match_index(x, i);
                CHECK(j != i);
                CHECK(match_index(x, j) == i);
                if (x.at(i) == 1) CHECK(j > i);
            }
        }
    }

    TEST_CASE("catalan examples and enumeration oracle") {
        CHECK(catalan_count(2) == 1);
        CHECK(catalan_count(4) == 2);
        CHECK(catalan_count(8) == 14);
        CHECK(catalan_count(0) == 1);
        CHECK_THROWS_AS(catalan_count(3), ParameterError);
        for (std::size_t n = 0; n <= 16; n += 2) {
            std::uint64_t count = 0;
            for (std::uint64_t c = 0; c < (1ULL << n); ++c) count += naive_balanced(c, n);
            CHECK(catalan_count(n) == BigInt(std::to_string(count)));
        }
    }

    TEST_CASE("enumerate_bal order") {
        const auto four = enumerate_bal(4);
        REQUIRE(four.size() == 2);
        CHECK(four[0].str() == "1010");
        CHECK(four[1].str() == "1100");
        CHECK(enumerate_bal(2).at(0).str() == "10");
        const auto zero = enumerate_bal(0);
        REQUIRE(zero.size() == 1);
        CHECK(zero[0].empty());
    }

    TEST_CASE("unmatched probabilities") {
        CHECK(unmatched_open_prob(1) == Rational(1, 2));
        CHECK(unmatched_open_prob(2) == Rational(1, 4));
        // Enumeration gives 1/4 at d = 3: only "(((" and "(()" qualify.
        CHECK(unmatched_open_prob(3) == Rational(1, 4));
        for (std::size_t d = 1; d <= 20; ++d) {
            CHECK(unmatched_open_prob(d) == unmatched_close_prob(d));
            CHECK(unmatched_open_prob(d) == walk_oracle(d));
        }
    }

    TEST_CASE("sqrt(d) times the unmatched probability stays bounded below") {
        double lo = 1;
        for (std::size_t d = 4; d <= 20; ++d) {
            lo = std::min(lo, std::sqrt(double(d)) * to_double(unmatched_open_prob(d)));
        }
        CHECK(lo > 0.3);
    }
}
