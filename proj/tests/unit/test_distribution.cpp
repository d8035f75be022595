#include <doctest.h>

#include <sstream>

#include "cellprobe/distribution.hpp"
#include "cellprobe/errors.hpp"

using namespace cellprobe;

TEST_SUITE("distribution") {
    TEST_CASE("construction merges and sorts") {
        const Distribution d({2, 2}, {{{1, 0}, 1}, {{0, 1}, 2}, {{1, 0}, 1}, {{1, 1}, 0}});
        CHECK(d.support_size() == 2);
        CHECK(d.total() == 4);
        CHECK(d.tuples()[0] == Tuple{0, 1});
        CHECK(d.probability({1, 0}) == Rational(1, 2));
        CHECK(d.probability({1, 1}) == 0);
        CHECK(d.space_size() == 4);
        CHECK_THROWS_AS(Distribution({2}, {{{2}, 1}}), DomainError);
        CHECK_THROWS_AS(Distribution({2}, {}), DomainError);
    }

    TEST_CASE("uniform factories") {
        const auto u = Distribution::uniform_product({2, 3});
        CHECK(u.support_size() == 6);
        CHECK(u.is_uniform_on_support());
        const auto b = Distribution::uniform_bits({BitVector::parse("01"), BitVector::parse("11")});
        CHECK(b.probability({0, 1}) == Rational(1, 2));
    }

    TEST_CASE("marginals") {
        const auto b = Distribution::uniform_bits(
            {BitVector::parse("001"), BitVector::parse("011"), BitVector::parse("101")});
        const std::vector<std::size_t> first{0};
        const auto m = b.marginal(first);
        CHECK(m.probability({0}) == Rational(2, 3));
        const std::vector<std::size_t> rev{2, 0};
        CHECK(b.marginal(rev).probability({1, 1}) == Rational(1, 3));
    }

    TEST_CASE("file format") {
        std::istringstream in(
            "# comment\n"
            "00 1/2\n"
            "01 0.25\n"
            "11 1/4\n");
        const auto d = read_distribution(in);
        CHECK(d.arity() == 2);
        CHECK(d.probability({0, 1}) == Rational(1, 4));
        std::ostringstream out;
        write_distribution(out, d);
        std::istringstream again(out.str());
        CHECK(read_distribution(again) == d);

        std::istringstream commas("alphabet: 3 2\n2,1 1\n");
        const auto c = read_distribution(commas);
        CHECK(c.alphabets() == std::vector<std::uint32_t>{3, 2});

        std::istringstream bad("0 1/2\n1 1/4\n");
        CHECK_THROWS(read_distribution(bad));
    }
}
