#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cellprobe/cli.hpp"
#include "cellprobe/reference_schemes.hpp"
#include "cellprobe/scheme_io.hpp"

using namespace cellprobe;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_SUITE("cli") {
    TEST_CASE("build, verify, redundancy") {
        const auto path = temp("cli_precomputed_n8.scm");
        auto b = run({"build-scheme", "--variant", "precomputed_sums", "--n", "8", "--m", "9", "--out", path});
        CHECK(b.code == 0);
        auto v = run({"verify", "--scheme", path});
        CHECK(v.code == 0);
        CHECK(v.out.find("status: pass") != std::string::npos);
        auto m = run({"verify", "--scheme", path, "--format", "machine"});
        CHECK(m.out.find("verify.status=pass") != std::string::npos);
        auto r = run({"redundancy", "--scheme", path});
        CHECK(r.code == 0);
        CHECK(r.out.find("redundancy_bits") != std::string::npos);
        auto s = run({"separator", "--scheme", path, "--gap", "4"});
        CHECK(s.code == 0);
        CHECK(s.out.find("[stage 0]") != std::string::npos);
        std::filesystem::remove(path);
    }

    TEST_CASE("exit codes") {
        CHECK(run({"verify", "--scheme", temp("no_such_file.scm")}).code == 2);
        CHECK(run({"verify"}).code == 2);
        CHECK(run({"frobnicate"}).code == 2);
        CHECK(run({"brackets", "count", "--n", "8", "--bogus"}).code == 2);
        CHECK(run({"brackets", "count", "--n", "7"}).code == 2);
        CHECK(run({"--help"}).code == 0);
    }

    TEST_CASE("brackets") {
        auto c = run({"brackets", "count", "--n", "8"});
        CHECK(c.code == 0);
        CHECK(c.out.find("count: 14") != std::string::npos);
        auto m = run({"brackets", "match", "--x", "(())", "--i", "2"});
        CHECK(m.out.find("match: 3") != std::string::npos);
        auto w = run({"brackets", "walk", "--d", "2"});
        CHECK(w.out.find("unmatched_open: 1/4") != std::string::npos);
    }

    TEST_CASE("stretcher and entropy commands") {
        const auto idx = temp("cli_indices.txt");
        {
            std::ofstream f(idx);
            for (int k = 1; k <= 100; ++k) f << k << '\n';
        }
        auto s = run({"stretcher", "--indices", idx, "--n", "128", "--c", "2"});
        CHECK(s.code == 0);
        CHECK(s.out.find("V_prime") != std::string::npos);

        const auto dist = temp("cli_dist.txt");
        {
            std::ofstream f(dist);
            f << "00 1/4\n01 1/4\n10 1/4\n11 1/4\n";
        }
        auto e = run({"entropy", "--dist", dist, "--format", "machine"});
        CHECK(e.code == 0);
        CHECK(e.out.find("entropy.entropy=2\n") != std::string::npos);
        auto gb = run({"goodset", "--mode", "blocks", "--dist", dist, "--sizes", "1,1", "--epsilon", "0.5"});
        CHECK(gb.code == 0);
        auto gc = run({"goodset", "--mode", "cells", "--dist", dist, "--q", "2", "--eta", "0.1"});
        CHECK(gc.code == 0);
        auto es = run({"entropy-sum", "--uniform-bits", "261", "--p", "1", "--i", "257", "--j", "261", "--c", "64"});
        CHECK(es.code == 0);
        CHECK(es.out.find("t: 1") != std::string::npos);
        std::filesystem::remove(idx);
        std::filesystem::remove(dist);
    }

    TEST_CASE("pipeline is byte-identical across runs") {
        const auto path = temp("cli_two_level.scm");
        write_scheme_file(path, build_two_level_rank(16, 2, 2, 17));
        auto a = run({"pipeline", "prefix", "--scheme", path, "--c", "2"});
        auto b = run({"pipeline", "prefix", "--scheme", path, "--c", "2"});
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        std::filesystem::remove(path);
    }

    TEST_CASE("build-scheme to stdout round-trips") {
        auto b = run({"build-scheme", "--variant", "bracket_table", "--n", "6", "--m", "7"});
        CHECK(b.code == 0);
        std::istringstream in(b.out);
        CHECK(same_scheme(read_scheme(in), build_bracket_table(6, 7)));
    }
}
