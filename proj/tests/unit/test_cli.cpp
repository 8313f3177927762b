#include "doctest.h"

#include "helpers.hpp"

#include "parasource/cli.hpp"

#include "json.hpp"

#include <sstream>

using namespace parasource;
using namespace testing;

namespace {

struct Run {
    int status = -1;
    std::string out;
    std::string err;
};

Run cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    Run r;
    r.status = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

} // namespace

TEST_CASE("cli rejects bad invocations with status 1")
{
    CHECK(cli({}).status == 1);

    auto r = cli({"estimate", "--example", "1", "--bogus"});
    CHECK(r.status == 1);
    CHECK(r.err.find("--bogus") != std::string::npos);

    r = cli({"estimate", "--example", "1", "--epsilon", "abc"});
    CHECK(r.status == 1);
    CHECK(r.err.find("--epsilon") != std::string::npos);

    r = cli({"estimate", "--config", "/nonexistent/case.json"});
    CHECK(r.status == 1);
    CHECK(r.err.find("--config") != std::string::npos);

    r = cli({"estimate", "--example", "9"});
    CHECK(r.status == 1);
    CHECK(r.err.find("--example") != std::string::npos);

    r = cli({"estimate", "--example", "3", "--kind", "4"});
    CHECK(r.status == 1);
    CHECK(r.err.find("--kind") != std::string::npos);

    r = cli({"estimate", "--example", "3", "--seed", "zz"});
    CHECK(r.status == 1);
    CHECK(r.err.find("--seed") != std::string::npos);

    r = cli({"estimate", "--example", "3", "--p", "-1"});
    CHECK(r.status == 1);
    CHECK(r.err.find("--p") != std::string::npos);

    r = cli({"estimate"});
    CHECK(r.status == 1);
    CHECK(r.err.find("--example") != std::string::npos);

    CHECK(cli({"--help"}).status == 0);
    CHECK(cli({"table", "--help"}).status == 0);
}

TEST_CASE("cli estimate writes fields and a JSON report")
{
    const auto dir = temp_dir("cli_estimate");
    const auto r = cli({"estimate", "--example", "3", "--epsilon", "0.01", "--kind", "2", "--seed", "7", "--out",
                        dir.string()});
    REQUIRE(r.status == 0);
    CHECK(std::filesystem::exists(dir / "ex3_estimate_r2.csv"));
    CHECK_FALSE(std::filesystem::exists(dir / "ex3_estimate_r1.csv"));
    CHECK(read_lines(dir / "ex3_estimate_r2.csv").size() == 1002);
    const auto j = nlohmann::json::parse(read_file(dir / "ex3_report.json"));
    CHECK(j["epsilon"] == 0.01);
    CHECK(j["seed"] == 7);
    CHECK(j["relative_errors"].contains("r2"));
    CHECK_FALSE(j["relative_errors"].contains("r1"));
}

TEST_CASE("cli table writes the median table")
{
    const auto dir = temp_dir("cli_table");
    const auto r = cli({"table", "--example", "1", "--seeds", "3", "--out", dir.string()});
    REQUIRE(r.status == 0);
    const auto lines = read_lines(dir / "table1.csv");
    CHECK(lines.size() == 6);
    CHECK(lines[1].rfind("1.0000000000e-01", 0) == 0);
    CHECK(lines[5].rfind("1.0000000000e-05", 0) == 0);

    const auto again = cli({"table", "--example", "1", "--seeds", "3", "--out", dir.string()});
    CHECK(read_lines(dir / "table1.csv") == lines);

    const auto r2 = cli({"table", "--example", "1", "--seeds", "2", "--epsilon", "0.1", "--epsilon", "0.01",
                         "--out", dir.string()});
    REQUIRE(r2.status == 0);
    CHECK(read_lines(dir / "table1.csv").size() == 3);
}

TEST_CASE("cli forward and figures")
{
    const auto dir = temp_dir("cli_figures");
    auto r = cli({"forward", "--example", "2", "--out", dir.string()});
    REQUIRE(r.status == 0);
    CHECK(read_lines(dir / "ex2_forward.csv").size() == 1002);
    CHECK(read_lines(dir / "ex2_source.csv").size() == 1002);

    r = cli({"figures", "--example", "3", "--out", dir.string()});
    REQUIRE(r.status == 0);
    CHECK(std::filesystem::exists(dir / "fig_ex3_source.csv"));
    for (const char* eps : {"0.004", "0.003", "0.002", "0.0001"}) {
        const std::string tag = std::string("fig_ex3_eps") + eps;
        CHECK(std::filesystem::exists(dir / (tag + "_measurement.csv")));
        CHECK(std::filesystem::exists(dir / (tag + "_r1.csv")));
        CHECK(std::filesystem::exists(dir / (tag + "_r3.csv")));
        CHECK(std::filesystem::exists(dir / (tag + "_report.json")));
    }
}

TEST_CASE("cli runs a custom config")
{
    const auto dir = temp_dir("cli_config");
    const auto path = dir / "case.json";
    std::ofstream(path) << R"({"alpha2": 1, "beta": [0.1], "nu": 0.5, "t0": 0.3,
      "grid": {"lower": [-4], "upper": [4], "points": [257]},
      "p": 2, "epsilon": 1e-3, "seed": 1,
      "source": {"pieces": [{"lower": [-1], "upper": [1], "value": 1}]}})";
    auto r = cli({"estimate", "--config", path.string(), "--out", dir.string()});
    REQUIRE(r.status == 0);
    CHECK(std::filesystem::exists(dir / "custom_report.json"));
    CHECK(std::filesystem::exists(dir / "custom_estimate_r3.csv"));

    std::ofstream(path) << R"({"alpha2": 1, "beta": [0.1, 2], "nu": 0.5, "t0": 0.3,
      "grid": {"lower": [-4], "upper": [4], "points": [257]},
      "p": 2, "epsilon": 1e-3, "seed": 1, "source": {"example": 3}})";
    r = cli({"estimate", "--config", path.string(), "--out", dir.string()});
    CHECK(r.status == 1);
    CHECK(r.err.find("beta") != std::string::npos);
}

TEST_CASE("cli verify reports the violated smoothing inequality with status 2")
{
    const auto dir = temp_dir("cli_verify");
    const auto r = cli({"verify", "--samples", "2000", "--json", (dir / "verify.json").string()});
    CHECK(r.status == 2);
    CHECK(r.out.find("lemma9[R2") != std::string::npos);
    CHECK(r.out.find("[ OK ] fft round trip 3-d") != std::string::npos);
    CHECK(r.out.find("[ OK ] forward vs rk4, example 6 parameters") != std::string::npos);
    const auto j = nlohmann::json::parse(read_file(dir / "verify.json"));
    CHECK(j["passed"] == false);
}
