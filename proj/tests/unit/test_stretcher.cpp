#include <doctest.h>

#include <cmath>
#include <random>

#include "cellprobe/errors.hpp"
#include "cellprobe/stretcher.hpp"

using namespace cellprobe;

namespace {

void check_pairs(const StretcherResult& r, const std::vector<std::uint64_t>& in, double c) {
    REQUIRE(r.v_prime.size() % 2 == 0);
    std::uint64_t prev = 0;
    for (std::size_t k = 0; k < r.v_prime.size(); k += 2) {
        const auto a = r.v_prime[k], b = r.v_prime[k + 1];
        CHECK(a > prev);
        CHECK(b > a);
        CHECK(double(a - prev) >= c * double(b - a));
        prev = b;
    }
    CHECK(std::includes(in.begin(), in.end(), r.v_prime.begin(), r.v_prime.end()));
}

}  // namespace

TEST_SUITE("stretcher") {
    TEST_CASE("too few indices give an empty result") {
        const auto r = find_stretcher({3, 5, 9}, 1 << 10, 2);
        CHECK(r.w_prime == 0);
        CHECK(r.guaranteed_size == 0);
    }

    TEST_CASE("consecutive indices") {
        std::vector<std::uint64_t> v;
        for (std::uint64_t k = 1; k <= 200; ++k) v.push_back(k);
        const auto r = find_stretcher(v, 256, 2);
        CHECK(r.window == 16);
        check_pairs(r, v, 2);
        CHECK(r.v_prime.size() >= r.guaranteed_size);
        REQUIRE(r.v_prime.size() >= 2);
        // First pair: smallest i with i >= 2 * 1.
        CHECK(r.v_prime[0] == 2);
        CHECK(r.v_prime[1] == 3);
    }

    TEST_CASE("doubling gaps") {
        std::vector<std::uint64_t> v;
        for (int k = 0; k <= 16; ++k) v.push_back(1ULL << k);
        try {
            const auto r = find_stretcher(v, 1 << 16, 2);
            check_pairs(r, v, 2);
            CHECK(r.v_prime.size() >= 2 * (v.size() / 32));
        } catch (const StretcherStuck& e) {
            check_pairs(e.partial(), v, 2);
        }
    }

    TEST_CASE("random ascending sets") {
        std::mt19937_64 rng(5);
        for (int rep = 0; rep < 60; ++rep) {
            const std::uint64_t n = 1ULL << (8 + rep % 9);
            const double c = rep % 2 ? 4 : 2;
            std::uniform_int_distribution<std::uint64_t> pick(1, n);
            std::vector<std::uint64_t> v;
            const std::size_t w = std::min<std::uint64_t>(n, 50 + rep * 20);
            for (std::size_t k = 0; k < w; ++k) v.push_back(pick(rng));
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
            try {
                const auto r = find_stretcher(v, n, c);
                check_pairs(r, v, c);
                CHECK(r.v_prime.size() >= r.guaranteed_size);
            } catch (const StretcherStuck& e) {
                check_pairs(e.partial(), v, c);
            }
        }
    }

    TEST_CASE("parameter errors") {
        CHECK_THROWS_AS(find_stretcher({1, 2}, 8, 1.0), ParameterError);
        CHECK_THROWS_AS(find_stretcher({2, 1}, 8, 2), ParameterError);
        CHECK_THROWS_AS(find_stretcher({0, 1}, 8, 2), ParameterError);
        CHECK_THROWS_AS(find_stretcher({1, 9}, 8, 2), ParameterError);
    }
}
