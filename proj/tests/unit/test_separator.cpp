#include <doctest.h>

#include <cmath>
#include <random>

#include "cellprobe/errors.hpp"
#include "cellprobe/separator.hpp"

using namespace cellprobe;

namespace {

std::vector<ProbeSet> random_family(std::mt19937_64& rng, std::size_t n, std::size_t q,
                                    std::uint32_t universe) {
    std::uniform_int_distribution<std::uint32_t> cell(0, universe - 1);
    std::uniform_int_distribution<std::size_t> size(0, q);
    std::vector<ProbeSet> sets(n);
    for (auto& s : sets) {
        const auto k = size(rng);
        for (std::size_t t = 0; t < k; ++t) s.push_back(cell(rng));
    }
    return sets;
}

// Independent check: sets Q(v) \ B, v in V, share no element.
bool disjoint_oracle(const std::vector<ProbeSet>& fam, const std::vector<std::size_t>& v,
                     const ProbeSet& b) {
    for (std::size_t x = 0; x < v.size(); ++x)
        for (std::size_t y = x + 1; y < v.size(); ++y)
            for (auto e : fam[v[x] - 1])
                for (auto f : fam[v[y] - 1])
                    if (e == f && !std::binary_search(b.begin(), b.end(), e)) return false;
    return true;
}

}  // namespace

TEST_SUITE("separator") {
    TEST_CASE("greedy_disjoint examples") {
        CHECK(greedy_disjoint({{1, 2}, {2, 3}, {4, 5}}) == std::vector<std::size_t>{1, 3});
        CHECK(greedy_disjoint({{1}, {1}, {1}, {1}}) == std::vector<std::size_t>{1});
        CHECK(greedy_disjoint({{1}, {2}, {3}}) == std::vector<std::size_t>{1, 2, 3});
        CHECK(greedy_disjoint({{}, {}, {1}}) == std::vector<std::size_t>{1, 2, 3});
    }

    TEST_CASE("greedy result is maximal") {
        std::mt19937_64 rng(7);
        for (int rep = 0; rep < 50; ++rep) {
            const auto fam = random_family(rng, 40, 3, 60);
            const auto chosen = greedy_disjoint(fam);
            CHECK(disjoint_oracle(fam, chosen, {}));
            for (std::size_t k = 1; k <= fam.size(); ++k) {
                if (std::find(chosen.begin(), chosen.end(), k) != chosen.end()) continue;
                auto plus = chosen;
                plus.push_back(k);
                CHECK_FALSE(disjoint_oracle(fam, plus, {}));
            }
        }
    }

    TEST_CASE("disjoint family succeeds at stage 0") {
        const ProbeFamily fam({{0}, {1}, {2}, {3}});
        const auto r = find_separator(fam, 4);
        CHECK(r.blocker.empty());
        CHECK(r.w == 4);
        CHECK(r.stages_run == 1);
    }

    TEST_CASE("identical singletons: two stages") {
        const ProbeFamily fam({{1}, {1}, {1}, {1}});
        const auto r = find_separator(fam, 2);
        CHECK(r.k0 == doctest::Approx(2.0));
        REQUIRE(r.log.size() == 2);
        CHECK(r.log[0].disjoint_found == 1);
        CHECK_FALSE(r.log[0].succeeded);
        CHECK(r.blocker == ProbeSet{1});
        CHECK(r.w == 4);
        CHECK(r.blocker.size() * 2 <= r.w);
    }

    TEST_CASE("random families meet the guarantees") {
        std::mt19937_64 rng(11);
        for (int rep = 0; rep < 30; ++rep) {
            const std::size_t q = 1 + rep % 3;
            const double g = rep % 2 ? 4 : 2;
            const auto sets = random_family(rng, 256, q, 300);
            const ProbeFamily fam(sets, 300);
            const auto r = find_separator(fam, g, q);
            CHECK(double(r.w) >= 256.0 / std::pow(g * q, double(q)));
            CHECK(double(r.blocker.size()) <= r.w / g);
            CHECK(disjoint_oracle(sets, r.kept, r.blocker));
            CHECK(r.stages_run <= q + 1);
            for (const auto& st : r.log) CHECK(st.blocker_bound_holds);
        }
    }

    TEST_CASE("parameter errors") {
        const ProbeFamily fam({{0, 1}, {1, 2}});
        CHECK_THROWS_AS(find_separator(fam, 1.5), ParameterError);
        CHECK_THROWS_AS(find_separator(fam, 2, 1), ParameterError);
    }

    TEST_CASE("bracket separator") {
        const std::size_t n = 1 << 16;
        std::vector<ProbeSet> disjoint(n), same(n, ProbeSet{0});
        for (std::size_t k = 0; k < n; ++k) disjoint[k] = {static_cast<std::uint32_t>(k)};
        const auto r = find_separator_brackets(ProbeFamily(disjoint), 4);
        CHECK(r.stages_run == 1);
        CHECK(r.a == 8);
        CHECK(r.blocker.empty());

        const auto s = find_separator_brackets(ProbeFamily(same), 4);
        CHECK(s.stages_run <= 2);
        CHECK(s.exponent_relation);
        CHECK(s.kept_large);
        CHECK(s.blocker_small);
        CHECK(4 * s.a <= s.b);

        // q too large for n.
        CHECK_THROWS_AS(find_separator_brackets(ProbeFamily({{0, 1}, {1, 2}, {2, 3}, {3, 4}}), 4),
                        ParameterError);
        CHECK_THROWS_AS(find_separator_brackets(ProbeFamily(same), 3), ParameterError);
    }
}
