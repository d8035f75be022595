#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "cellprobe/errors.hpp"
#include "cellprobe/infotheory.hpp"

using namespace cellprobe;

namespace {

// Independent oracles over small explicit pmfs.
double h_oracle(const std::map<Tuple, double>& pmf) {
    double h = 0;
    for (const auto& [t, p] : pmf)
        if (p > 0) h -= p * std::log2(p);
    return h;
}

std::map<Tuple, double> project(const Distribution& d, const std::vector<std::size_t>& cs) {
    std::map<Tuple, double> out;
    for (std::size_t k = 0; k < d.support_size(); ++k) {
        Tuple t;
        for (auto c : cs) t.push_back(d.tuples()[k][c]);
        out[t] += to_double(d.probability_at(k));
    }
    return out;
}

Distribution random_dist(std::mt19937_64& rng, std::size_t bits) {
    std::uniform_int_distribution<std::uint64_t> w(0, 9);
    std::vector<std::pair<Tuple, std::uint64_t>> items;
    for (std::uint64_t code = 0; code < (1ULL << bits); ++code) {
        Tuple t;
        for (std::size_t k = 0; k < bits; ++k) t.push_back((code >> k) & 1);
        items.emplace_back(t, w(rng));
    }
    items[0].second += 1;
    return Distribution(std::vector<std::uint32_t>(bits, 2), items);
}

std::vector<BitVector> strings_where(std::size_t n, bool (*pred)(const BitVector&)) {
    std::vector<BitVector> out;
    for (const auto& x : all_bitstrings(n))
        if (pred(x)) out.push_back(x);
    return out;
}

}  // namespace

TEST_SUITE("infotheory") {
    TEST_CASE("entropy examples") {
        CHECK(entropy(Distribution::uniform_product({2, 2, 2})) == doctest::Approx(3.0));
        CHECK(entropy(Distribution({2}, {{{1}, 5}})) == doctest::Approx(0.0));
        CHECK(entropy(Distribution({3}, {{{0}, 2}, {{1}, 1}, {{2}, 1}})) == doctest::Approx(1.5));
    }

    TEST_CASE("conditional entropy examples") {
        const std::vector<std::size_t> x{0}, y{1};
        const auto indep = Distribution::uniform_product({2, 2});
        CHECK(conditional_entropy(indep, x, y) == doctest::Approx(1.0));
        const Distribution copy({2, 2}, {{{0, 0}, 1}, {{1, 1}, 1}});
        CHECK(conditional_entropy(copy, x, y) == doctest::Approx(0.0));
        const Distribution three({2, 2}, {{{0, 0}, 1}, {{0, 1}, 1}, {{1, 0}, 1}});
        CHECK(conditional_entropy(three, x, y) == doctest::Approx(2.0 / 3.0));
    }

    TEST_CASE("tv distance examples") {
        const auto u = Distribution::uniform_product({2});
        CHECK(tv_distance(u, u) == 0);
        CHECK(tv_distance(Distribution({2}, {{{0}, 1}}), Distribution({2}, {{{1}, 1}})) == 1);
        CHECK(tv_distance(Distribution({2}, {{{0}, 3}, {{1}, 1}}), u) == Rational(1, 4));
        CHECK_THROWS_AS(tv_distance(u, Distribution::uniform_product({3})), DomainError);
    }

    TEST_CASE("chain rule and conditioning on random joints") {
        std::mt19937_64 rng(3);
        for (int rep = 0; rep < 60; ++rep) {
            const auto d = random_dist(rng, 3 + rep % 5);
            const std::vector<std::size_t> x{0}, y{1}, z{2}, xz{0, 2}, xy{0, 1}, yz{1, 2};
            // H(X,Y|Z) = H(X|Z) + H(Y|X,Z)
            const double lhs = conditional_entropy(d, xy, z);
            const double rhs = conditional_entropy(d, x, z) + conditional_entropy(d, y, xz);
            CHECK(std::fabs(lhs - rhs) <= 1e-9);
            CHECK(conditional_entropy(d, x, y) >= conditional_entropy(d, x, yz) - 1e-9);
            // Against the oracle: H(X|Y) = H(X,Y) - H(Y).
            const double oracle = h_oracle(project(d, {0, 1})) - h_oracle(project(d, {1}));
            CHECK(conditional_entropy(d, x, y) == doctest::Approx(oracle).epsilon(1e-9));
            std::vector<std::size_t> every(d.arity());
            std::iota(every.begin(), every.end(), 0);
            CHECK(entropy(d) == doctest::Approx(h_oracle(project(d, every))).epsilon(1e-9));
        }
    }

    TEST_CASE("marginal tv matches the explicit marginal") {
        std::mt19937_64 rng(9);
        for (int rep = 0; rep < 30; ++rep) {
            const auto d = random_dist(rng, 5);
            const std::vector<std::size_t> cs{4, 1};
            CHECK(marginal_tv_to_uniform(d, cs) == tv_to_uniform(d.marginal(cs)));
        }
    }

    TEST_CASE("high entropy implies close to uniform") {
        const auto u = check_high_entropy_uniform(Distribution::uniform_product({2, 2}), 0);
        CHECK(u.precondition_holds);
        CHECK(u.distance == 0);
        CHECK(u.holds);

        std::vector<BitVector> half;
        for (const auto& x : all_bitstrings(4))
            if (x.at(1) == 0) half.push_back(x);
        const auto h = check_high_entropy_uniform(Distribution::uniform_bits(half), 1.0);
        CHECK(h.precondition_holds);
        CHECK(h.distance == Rational(1, 2));
        CHECK(h.bound == doctest::Approx(4.0));
        CHECK(h.holds);

        const auto low = check_high_entropy_uniform(Distribution::uniform_bits(half), 0.5);
        CHECK_FALSE(low.precondition_holds);
    }

    TEST_CASE("good_blocks examples") {
        const auto full = good_blocks(Distribution::uniform_bits(all_bitstrings(4)), {2, 2}, 0.5);
        CHECK(full.good == std::vector<std::size_t>{1, 2});

        const auto x = strings_where(4, [](const BitVector& b) { return b.at(1) == 0; });
        const auto r = good_blocks(Distribution::uniform_bits(x), {1, 1, 1, 1}, 0.5);
        REQUIRE(r.deficiency.size() == 4);
        CHECK(r.deficiency[0] == doctest::Approx(1.0));
        for (int k = 1; k < 4; ++k) CHECK(r.deficiency[k] == doctest::Approx(0.0));
        CHECK(r.good == std::vector<std::size_t>{2, 3, 4});
        CHECK(r.size_bound == doctest::Approx(2.0));
        CHECK(r.size_bound_satisfied);
        CHECK(r.tv_clause_holds);
    }

    TEST_CASE("good_blocks on random subsets") {
        std::mt19937_64 rng(13);
        auto all = all_bitstrings(10);
        for (int rep = 0; rep < 10; ++rep) {
            std::shuffle(all.begin(), all.end(), rng);
            std::vector<BitVector> x(all.begin(), all.begin() + 256);
            std::sort(x.begin(), x.end());
            const auto r = good_blocks(Distribution::uniform_bits(x), {2, 2, 2, 2, 2}, 0.5);
            CHECK(r.a == doctest::Approx(2.0));
            CHECK(std::fabs(r.deficiency_sum - 2.0) <= 1e-9);
            CHECK(r.good.size() >= 1);
            CHECK(r.size_bound_satisfied);
            CHECK(r.tv_clause_holds);
        }
    }

    TEST_CASE("good_cells examples") {
        const auto full = good_cells(Distribution::uniform_product({2, 2, 2}), 2, 0.1);
        CHECK(full.good == std::vector<std::size_t>{0, 1, 2});
        CHECK(full.verified);

        // y_1 constant: coordinate 0 (1-based index 1) is removed.
        const Distribution y({2, 2, 2}, {{{0, 0, 0}, 1}, {{0, 0, 1}, 1}, {{0, 1, 0}, 1}, {{0, 1, 1}, 1}});
        const auto one = good_cells(y, 1, 0.25);
        CHECK(one.good == std::vector<std::size_t>{1, 2});
        const auto two = good_cells(y, 2, 0.25);
        CHECK(two.good == std::vector<std::size_t>{1, 2});
        CHECK(two.verified);
        CHECK(two.max_tv == 0);
    }

    TEST_CASE("good_cells budget") {
        const auto big = Distribution::uniform_product(std::vector<std::uint32_t>(20, 2));
        CHECK_THROWS_AS(good_cells(big, 6, 0.1, GoodCellsOptions{1000}), SizeError);
    }
}
