#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "imcf/errors.hpp"
#include "imcf/cli.hpp"
#include "imcf/continuation.hpp"
#include "imcf/io.hpp"
#include "imcf/plot.hpp"

using namespace imcf;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "imcf-profile");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
    const fs::path d = fs::temp_directory_path() / ("imcf_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("number formatting round-trips") {
    for (double x : {0.1, -0.9993749511650923, 1e-300, 12345.678}) {
        CHECK(io::parse_number(io::format_number(x)) == x);
    }
    CHECK(io::parse_number("+2.5") == 2.5);
    CHECK_FALSE(io::parse_number("2,5"));
    CHECK_FALSE(io::parse_number(""));
}

TEST_CASE("profile CSV and JSON round-trip") {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    SolverConfig c;
    c.r_max = 5.0;
    const auto sol = solve_profile(p, validate(c, p));
    std::stringstream csv;
    io::write_profile_csv(csv, sol.profile);
    const auto back = io::read_profile_csv(csv, p);
    REQUIRE(back.size() == sol.profile.size());
    CHECK(back.points()[7].fr == sol.profile.points()[7].fr);

    std::stringstream js;
    io::write_profile_json(js, sol.profile);
    const auto jb = io::read_profile_json(js);
    CHECK(jb.segments().size() == sol.profile.segments().size());
    CHECK(jb.points().back().f == sol.profile.points().back().f);
}

TEST_CASE("CSV schema errors name the defect") {
    const Parameters p = validate(Parameters{2, 2.0, -1.0});
    std::istringstream bad_header("r,f,fr\n0,-1,0\n");
    CHECK_THROWS_WITH_AS(io::read_profile_csv(bad_header, p), doctest::Contains("header"), SchemaError);
    std::istringstream short_row("r,f,fr,frr,w,q\n0,-1,0,0.25\n");
    CHECK_THROWS_WITH_AS(io::read_profile_csv(short_row, p), doctest::Contains("fields"), SchemaError);
    std::istringstream decreasing("r,f,fr,frr,w,q\n0,-1,0,0.25,1,\n1,-1,0,0.25,1,\n0.5,-1,0,0.25,1,\n");
    CHECK_THROWS_WITH_AS(io::read_profile_csv(decreasing, p), doctest::Contains("increasing"), SchemaError);
    std::istringstream text("r,f,fr,frr,w,q\n0,-1,abc,0.25,1,\n");
    CHECK_THROWS_WITH_AS(io::read_profile_csv(text, p), doctest::Contains("not a number"), SchemaError);
}

TEST_CASE("config parsing and lists") {
    std::istringstream cfg("# comment\nn = 3\n\nlambda=2 # trailing\n");
    const auto m = cli::parse_config(cfg);
    CHECK(m.at("n") == "3");
    CHECK(m.at("lambda") == "2");
    std::istringstream bad("n 3\n");
    CHECK_THROWS_AS(cli::parse_config(bad), cli::UsageError);
    CHECK(cli::parse_list("1.5, 2,5") == std::vector<double>{1.5, 2.0, 5.0});
    CHECK_THROWS_AS(cli::parse_list("1,,2"), cli::UsageError);
    CHECK(cli::pool_size() >= 1);
}

TEST_CASE("svg output is locale independent and script free") {
    plot::Chart ch;
    ch.title = "q <test>";
    ch.rule_y = 2.0;
    ch.rule_label = "alpha0";
    const auto svg = plot::render_svg(ch, {{{1, 2, 3}, {1.5, 1.9, 2.0}, "q"}});
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find("<script") == std::string::npos);
    CHECK(svg.find("&lt;test&gt;") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);
}

TEST_CASE("solve writes profile, manifest and plots") {
    const auto dir = scratch("solve");
    const auto r = invoke({"solve", "--n", "2", "--lambda", "2", "--mu", "-1", "--r-max", "1000", "--plot",
                           "--out", dir.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "profile.csv").rfind("r,f,fr,frr,w,q\n", 0) == 0);
    CHECK(fs::exists(dir / "profile_q.svg"));
    const auto man = io::Json::parse(slurp(dir / "manifest.json"));
    CHECK(man["command"] == "solve");
    CHECK(man["summary"]["alpha0"] == 2.0);
    CHECK(man["summary"]["asymptotics"]["pass"] == true);
    CHECK(man["summary"]["verification"]["pass"]["all"] == true);
}

TEST_CASE("solve is deterministic and replay reproduces it") {
    const auto a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
    const std::vector<std::string> base{"solve", "--n", "3", "--lambda", "1.5", "--mu", "-0.25", "--r-max", "500"};
    auto args = base;
    args.insert(args.end(), {"--out", a.string()});
    REQUIRE(invoke(args).code == 0);
    args = base;
    args.insert(args.end(), {"--out", b.string()});
    REQUIRE(invoke(args).code == 0);
    CHECK(slurp(a / "profile.csv") == slurp(b / "profile.csv"));
    REQUIRE(invoke({"replay", (a / "manifest.json").string(), "--out", c.string()}).code == 0);
    CHECK(slurp(a / "profile.csv") == slurp(c / "profile.csv"));
}

TEST_CASE("flags override the config file") {
    const auto dir = scratch("config");
    {
        std::ofstream cfg(dir / "run.cfg");
        cfg << "n=2\nlambda=2\nmu=-1\nr_max=50\nformat=json\n";
    }
    const auto r = invoke({"solve", "--config", (dir / "run.cfg").string(), "--r-max", "20", "--out", dir.string()});
    REQUIRE(r.code == 0);
    const auto man = io::Json::parse(slurp(dir / "manifest.json"));
    CHECK(man["config"]["r_max"] == 20.0);
    CHECK(man["config"]["format"] == "json");
    CHECK(fs::exists(dir / "profile.json"));
}

TEST_CASE("exit codes") {
    const auto dir = scratch("codes");
    auto r = invoke({"solve", "--n", "2", "--lambda", "1", "--mu", "-1", "--out", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("1/(n-1)") != std::string::npos);
    CHECK(invoke({"solve", "--n", "2", "--lambda", "2"}).code == 1);
    CHECK(invoke({"solve", "--n", "2", "--lambda", "2", "--mu", "1", "--out", dir.string()}).code == 1);
    CHECK(invoke({"solve", "--n", "x", "--lambda", "2", "--mu", "-1"}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"sweep", "--out", dir.string()}).code == 1);
    r = invoke({"solve", "--n", "2", "--lambda", "1", "--mu", "-1", "--mode", "exploratory", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("step_underflow") != std::string::npos);
}

TEST_CASE("corrupted profile file is a schema error") {
    const auto dir = scratch("corrupt");
    {
        std::ofstream bad(dir / "profile.csv");
        bad << "r,f,fr,frr,w,q\n0,-1,0,0.25,1,\n0.1,-0.99,oops,0.25,1,\n";
    }
    const auto r = invoke({"verify", "--profile", (dir / "profile.csv").string(), "--n", "2", "--lambda", "2",
                           "--mu", "-1", "--out", dir.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("schema error") != std::string::npos);
}

TEST_CASE("verify accepts a saved JSON profile") {
    const auto dir = scratch("verify");
    REQUIRE(invoke({"solve", "--n", "2", "--lambda", "2", "--mu", "-1", "--format", "json", "--out", dir.string()})
                .code == 0);
    const auto r = invoke({"verify", "--profile", (dir / "profile.json").string(), "--out", dir.string()});
    CHECK(r.code == 0);
    const auto rep = io::Json::parse(slurp(dir / "verification.json"));
    CHECK(rep["pass"]["all"] == true);
}

TEST_CASE("sweep alpha0 column and row order") {
    const auto dir = scratch("sweep");
    const auto r = invoke({"sweep", "--n-list", "2", "--lambda-list", "1.5,2,5", "--mu-list", "-1", "--r-max", "1000",
                           "--out", dir.string()});
    CHECK(r.code == 0);
    std::istringstream csv(slurp(dir / "sweep.csv"));
    std::string line;
    std::getline(csv, line);
    std::vector<double> a0;
    while (std::getline(csv, line)) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        a0.push_back(*io::parse_number(cells.at(3)));
    }
    CHECK(a0 == std::vector<double>{3.0, 2.0, 1.25});
}
