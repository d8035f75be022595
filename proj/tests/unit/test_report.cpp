#include <doctest.h>

#include "cellprobe/report.hpp"

using namespace cellprobe;

TEST_SUITE("report") {
    TEST_CASE("text and machine forms") {
        Report r;
        r.section("s");
        r.add("flag", true);
        r.add_count("n", 7);
        r.add("p", Rational(1, 4));
        r.add_list("xs", std::vector<int>{1, 2});
        r.add_list("none", std::vector<int>{});
        const auto text = r.str(ReportFormat::text);
        CHECK(text.find("[s]") != std::string::npos);
        CHECK(text.find("  flag: yes") != std::string::npos);
        CHECK(text.find("  xs: 1 2") != std::string::npos);
        CHECK(text.find("  none: -") != std::string::npos);
        const auto machine = r.str(ReportFormat::machine);
        CHECK(machine.find("s.n=7\n") != std::string::npos);
        CHECK(r.find("s", "p").rfind("1/4", 0) == 0);
        CHECK(r.find("s", "missing").empty());
        CHECK(parse_report_format("machine") == ReportFormat::machine);
        CHECK_THROWS(parse_report_format("xml"));
    }
}
