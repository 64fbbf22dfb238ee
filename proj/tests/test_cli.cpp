#include "cli.hpp"

#include <doctest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using podles::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    args.insert(args.begin(), "podles");
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_SUITE("cli")
{
    TEST_CASE("verify succeeds and reports JSON")
    {
        auto r = call({"verify", "--q", "0.5", "--t", "1", "--lmax2", "21", "--prec", "64"});
        CHECK(r.code == 0);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j["ctx"]["arith"] == "binary64");
        CHECK(j["summary"]["fail"] == 0);
        CHECK(j["checks"].size() > 10);
        for (const auto& c : j["checks"]) CHECK(c["ms"].is_null());
    }

    TEST_CASE("usage errors exit with 2")
    {
        auto bad_q = call({"verify", "--q", "1.5"});
        CHECK(bad_q.code == 2);
        CHECK(bad_q.err.find("q must lie in (0,1)") != std::string::npos);
        CHECK(call({"verify", "--lmax2", "3"}).code == 2);
        CHECK(call({"verify", "--bogus"}).code == 2);
        CHECK(call({"nosuch"}).code == 2);
        CHECK(call({"index", "--method", "guess"}).code == 2);
        CHECK(call({"zeta", "--elem", "x0 +"}).code == 2);
    }

    TEST_CASE("PODLES_PREC_BITS selects the multiprecision tier")
    {
        ::setenv("PODLES_PREC_BITS", "128", 1);
        auto r = call({"index", "--q", "0.5", "--lmax2", "21", "--format", "json"});
        ::unsetenv("PODLES_PREC_BITS");
        CHECK(r.code == 0);
        auto j = nlohmann::json::parse(r.out);
        CHECK(j["ctx"]["arith"] == "mpfr");
        CHECK(j["ctx"]["prec"] == 128);
    }

    TEST_CASE("repeated runs are byte-identical")
    {
        std::vector<std::string> args{"verify", "--q", "0.3", "--t", "0.5", "--lmax2", "21"};
        CHECK(call(args).out == call(args).out);
    }

    TEST_CASE("index text output")
    {
        auto r = call({"index", "--q", "0.5", "--lmax2", "41"});
        CHECK(r.code == 0);
        CHECK(r.out.rfind("1.00000000 ±", 0) == 0);
        auto s = call({"index", "--q", "0.5", "--lmax2", "41", "--method", "series", "--N2", "3"});
        CHECK(s.out.rfind("3.00000000 ±", 0) == 0);
    }

    TEST_CASE("zeta text output")
    {
        auto r = call({"zeta", "--q", "0.5", "--lmax2", "41", "--residue", "2", "--elem", "1"});
        CHECK(r.code == 0);
        CHECK(r.out.rfind("residue_at(2) = 4", 0) == 0);
    }

    TEST_CASE("decay CSV header")
    {
        auto r = call({"decay", "--q", "0.5", "--lmax2", "21"});
        CHECK(r.out.rfind("check,component,l2,norm\n", 0) == 0);
    }

    TEST_CASE("dump writes entries and --out writes a file")
    {
        auto r = call({"dump", "--op", "gamma", "--lmax2", "5"});
        CHECK(r.code == 0);
        CHECK(r.out.find("1 -1 -1 1 -1 -1 -1 0\n") != std::string::npos);
        auto path = std::filesystem::temp_directory_path() / "podles_cli_test.txt";
        auto w = call({"dump", "--op", "D", "--lmax2", "5", "--out", path.string()});
        CHECK(w.code == 0);
        CHECK(w.out.empty());
        std::ifstream in(path);
        std::stringstream ss;
        ss << in.rdbuf();
        CHECK_FALSE(ss.str().empty());
        std::filesystem::remove(path);
    }
}
