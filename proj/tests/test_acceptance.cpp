#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "bsdelab/verify.hpp"

TEST_CASE("oracle suite: every criterion passes at the default seed") {
    const auto rows = bsdelab::oracle_suite(1);
    REQUIRE(rows.size() == 11);  // 10 criteria plus the built-in self-test row
    for (const auto& row : rows) {
        std::printf("%s\n", bsdelab::format_row(row).c_str());
        if (!row.details.empty()) std::printf("      %s\n", row.details.c_str());
    }
    for (const auto& row : rows) {
        INFO(bsdelab::format_row(row));
        CHECK(row.pass);
    }
}
