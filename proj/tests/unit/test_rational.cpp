#include <doctest.h>

#include "cellprobe/rational.hpp"

using namespace cellprobe;

TEST_SUITE("rational") {
    TEST_CASE("exact helpers") {
        CHECK(make_rational(2, 4) == Rational(1, 2));
        CHECK(pow2(10) == 1024);
        CHECK(ipow(3, 4) == 81);
        CHECK(binomial(4, 2) == 6);
        CHECK(binomial(52, 5) == 2598960);
        CHECK(lg(BigInt(1024)) == doctest::Approx(10.0));
        CHECK(exact_rational(0.375) == Rational(3, 8));
    }

    TEST_CASE("lg of huge integers") {
        CHECK(lg(pow2(4000)) == doctest::Approx(4000.0));
    }

    TEST_CASE("format_real is stable") {
        CHECK(format_real(0.5) == format_real(0.5));
        CHECK(format_real(3.0).find('3') != std::string::npos);
    }
}
