#include "podles/report.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

using namespace podles;

TEST_SUITE("report")
{
    TEST_CASE("seventeen digit floats")
    {
        CHECK(format17(0.1) == "0.10000000000000001");
        Json j;
        j["a"] = 0.1;
        j["b"] = std::numeric_limits<double>::quiet_NaN();
        j["c"] = 3;
        CHECK(dump_json(j) == "{\n  \"a\": 0.10000000000000001,\n  \"b\": null,\n  \"c\": 3\n}\n");
    }

    TEST_CASE("check records omit empty notes and keep unset numbers null")
    {
        CheckReport r;
        r.id = "x";
        r.mode = CheckMode::DecayFit;
        r.slope = -1.0;
        auto j = check_json(r);
        CHECK(j["mode"] == "decay-fit");
        CHECK(j["residual"].is_null());
        CHECK(j["slope"] == -1.0);
        CHECK_FALSE(j.contains("note"));
    }

    TEST_CASE("summary counts")
    {
        ModelContext ctx;
        std::vector<CheckReport> rs(3);
        rs[0].pass = true;
        auto j = suite_json(ctx, 1, SuiteOptions{}, rs);
        CHECK(j["summary"]["pass"] == 1);
        CHECK(j["summary"]["fail"] == 2);
        CHECK(j["ctx"]["arith"] == "binary64");
    }

    TEST_CASE("series CSV")
    {
        CheckReport r;
        r.id = "appr.xz";
        r.series.push_back({"xm1", {{17, 0.5}}});
        std::ostringstream os;
        write_series_csv(os, {r});
        CHECK(os.str() == "check,component,l2,norm\nappr.xz,xm1,17,0.5\n");
    }
}
