#include <doctest.h>

#include <filesystem>
#include <sstream>

#include "cellprobe/errors.hpp"
#include "cellprobe/reference_schemes.hpp"
#include "cellprobe/scheme_io.hpp"

using namespace cellprobe;

namespace {

Scheme round_trip(const Scheme& s) {
    std::stringstream buf;
    write_scheme(buf, s);
    return read_scheme(buf);
}

}  // namespace

TEST_SUITE("scheme_io") {
    TEST_CASE("builtin schemes round-trip field for field") {
        for (const auto& s : {build_precomputed_sums(6, 7), build_two_level_rank(8, 2, 4, 9),
                              build_raw_identity(8, 16), build_bracket_table(6, 7)}) {
            const auto back = round_trip(s);
            CHECK(same_scheme(s, back));
            CHECK(verify_scheme(back, default_oracle(back)).pass);
        }
    }

    TEST_CASE("table schemes round-trip") {
        const auto t = materialize(build_two_level_rank(8, 2, 4, 9));
        CHECK(t.encoder_is_table());
        const auto back = round_trip(t);
        CHECK(same_scheme(t, back));
        CHECK(verify_scheme(back, default_oracle(back)).pass);

        const auto b = materialize(build_bracket_table(6, 7));
        CHECK(same_scheme(b, round_trip(b)));
    }

    TEST_CASE("writing is deterministic") {
        std::stringstream a, b;
        write_scheme(a, build_two_level_rank(8, 2, 4, 9));
        write_scheme(b, build_two_level_rank(8, 2, 4, 9));
        CHECK(a.str() == b.str());
    }

    TEST_CASE("file round trip and unreadable files") {
        const auto path = std::filesystem::temp_directory_path() / "cellprobe_io_test.scm";
        write_scheme_file(path, build_precomputed_sums(4, 5));
        CHECK(same_scheme(read_scheme_file(path), build_precomputed_sums(4, 5)));
        std::filesystem::remove(path);
        CHECK_THROWS_AS(read_scheme_file(path), FormatError);
    }

    TEST_CASE("malformed input") {
        std::istringstream bad("n: four\n");
        CHECK_THROWS_AS(read_scheme(bad), FormatError);
    }

    TEST_CASE("verification report fields") {
        std::ostringstream out;
        write_report(out, verify_scheme(build_precomputed_sums(4, 5), prefix_sum_oracle()));
        CHECK(out.str().find("status: pass") != std::string::npos);
        CHECK(out.str().find("checked: 64") != std::string::npos);
        CHECK(out.str().find("counterexample") != std::string::npos);
    }
}
