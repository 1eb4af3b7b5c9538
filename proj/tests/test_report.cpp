#include "scsn/report.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace scsn::report;

TEST_CASE("negative transfer deltas and gaps") {
    const auto t = negative_transfer_report({{"baseline", "single", "S01", 0.820},
                                             {"baseline", "multi", "S01", 0.734},
                                             {"scsn", "multi", "S01", 0.818}});
    REQUIRE(t.rows.size() == 2);
    const auto& row = t.rows[0];
    CHECK(row.subject == "S01");
    REQUIRE(t.delta_models.size() >= 1);
    CHECK(t.delta_models[0] == "baseline");
    CHECK(std::abs(*row.delta[0] - (0.734 - 0.820)) < 1e-12);
    REQUIRE(t.gap_models.size() == 1);
    CHECK(t.gap_models[0] == "scsn");
    CHECK(std::abs(*row.gap[0] - (0.818 - 0.734)) < 1e-12);
    CHECK(t.mean().subject == "mean");
}

TEST_CASE("identical regimes give zero delta") {
    const auto t = negative_transfer_report({{"scsn", "single", "S01", 0.6}, {"scsn", "multi", "S01", 0.6}});
    CHECK(*t.rows[0].delta[0] == 0.0);
}

TEST_CASE("six columns and a mean row") {
    std::vector<ComparisonRow> rows;
    for (const char* m : {"baseline", "scsn", "scsn-mmd"})
        for (const char* r : {"single", "multi"})
            for (const char* s : {"S01", "S02"}) rows.push_back({m, r, s, s[2] == '1' ? 0.5 : 0.7});
    const auto t = negative_transfer_report(rows);
    CHECK(t.columns.size() == 6);
    CHECK(t.rows.size() == 3);
    CHECK(t.mean().accuracy.size() == 6);
    for (const auto& a : t.mean().accuracy) CHECK(std::abs(*a - 0.6) < 1e-12);
}

TEST_CASE("single run gives one data row and marks missing cells") {
    const auto t = negative_transfer_report({{"scsn", "multi", "S03", 0.9}});
    CHECK(t.rows.size() == 2);
    std::ostringstream os;
    write_csv(os, t);
    const std::string csv = os.str();
    CHECK(csv.rfind("subject,scsn/multi", 0) == 0);
    CHECK(csv.find("S03,0.900000") != std::string::npos);

    const auto u = negative_transfer_report({{"baseline", "multi", "S01", 0.5}, {"baseline", "single", "S02", 0.7}});
    std::ostringstream o2;
    write_csv(o2, u);
    CHECK(o2.str().find("NA") != std::string::npos);
}
