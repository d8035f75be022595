#include <doctest.h>

#include <cmath>

#include "cellprobe/errors.hpp"
#include "cellprobe/pipeline.hpp"
#include "cellprobe/reference_schemes.hpp"

using namespace cellprobe;

TEST_SUITE("pipeline") {
    TEST_CASE("contradiction chain") {
        const auto a = contradiction_chain(Rational(1, 200), Rational(1, 10), Rational(1, 10), 0);
        CHECK(a.bound == Rational(1, 100));
        CHECK(a.contradiction);
        CHECK_FALSE(contradiction_chain(Rational(1, 50), Rational(1, 10), Rational(1, 10), 0).contradiction);
        const auto c = contradiction_chain(0, Rational(1, 10), Rational(1, 10), Rational(1, 200));
        CHECK(c.bound == Rational(161, 40000));
        CHECK(to_double(c.bound) == doctest::Approx(0.004025));
        const auto low = contradiction_chain(0, Rational(1, 20), Rational(1, 2), Rational(1, 10));
        CHECK(low.bound <= 0);
        CHECK_FALSE(low.contradiction);
    }

    TEST_CASE("two-level scheme, n = 16") {
        const auto s = build_two_level_rank(16, 2, 2, 17);
        const auto r = run_prefix_pipeline(s, 2);
        CHECK(r.scale_independent_ok());
        if (!r.truncated) {
            REQUIRE(r.witness);
            const auto& w = *r.witness;
            const double s_formula = double(w.threshold.t) + (double(w.ell) + double(w.d)) / 2 +
                                     std::cbrt(2.0) * std::sqrt(double(w.d));
            CHECK(*r.s == doctest::Approx(s_formula).epsilon(1e-12));
            CHECK(*r.s_prime == doctest::Approx(double(w.threshold.t) + double(w.ell) / 2));
        } else {
            CHECK_FALSE(r.truncated_stage.empty());
        }
        const auto again = run_prefix_pipeline(s, 2);
        CHECK(pipeline_report(r).str(ReportFormat::text) == pipeline_report(again).str(ReportFormat::text));
    }

    TEST_CASE("other prefix subjects") {
        for (const auto& s : {build_precomputed_sums(16, 17), build_raw_identity(16, 4)}) {
            const auto r = run_prefix_pipeline(s, 2);
            CHECK(r.scale_independent_ok());
            CHECK(r.fixing.has_value());
        }
    }

    TEST_CASE("degenerate n = 2 truncates") {
        const auto r = run_prefix_pipeline(build_precomputed_sums(2, 3), 2);
        CHECK(r.truncated);
        CHECK(r.truncated_stage == "separator");
    }

    TEST_CASE("bracket pipeline") {
        for (std::size_t n : {8, 12}) {
            const auto r = run_bracket_pipeline(build_bracket_table(n, n + 1), 4);
            CHECK(r.scale_independent_ok());
            if (r.chain) {
                REQUIRE_FALSE(r.chain->lines.empty());
                CHECK(r.chain->lines.front().value == 0);
                CHECK(*r.chain->lines.front().exact == 0);
            } else {
                CHECK(r.truncated);
            }
        }
        CHECK_THROWS_AS(run_bracket_pipeline(build_precomputed_sums(8, 9), 4), ParameterError);
        CHECK_THROWS_AS(run_bracket_pipeline(build_bracket_table(8, 9), 3), ParameterError);
    }

    TEST_CASE("wrong domain") {
        CHECK_THROWS_AS(run_prefix_pipeline(build_bracket_table(8, 9), 2), ParameterError);
        CHECK_THROWS_AS(run_prefix_pipeline(build_precomputed_sums(8, 9), 1), ParameterError);
    }
}
