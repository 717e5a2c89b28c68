#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "shartree/report.hpp"
#include "shartree/runner.hpp"

using namespace sh;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Cli {
    int code = 0;
    std::string out, err;
};

Cli call(std::vector<std::string> args)
{
    args.insert(args.begin(), "singular-hartree");
    std::vector<const char*> argv;
    for (auto& a : args) argv.push_back(a.c_str());
    std::ostringstream o, e;
    Cli r;
    r.code = cli_main(static_cast<int>(argv.size()), argv.data(), o, e);
    r.out = o.str();
    r.err = e.str();
    return r;
}

fs::path scratch(const std::string& name)
{
    auto p = fs::temp_directory_path() / ("sh_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

} // namespace

TEST_CASE("parse_config")
{
    auto c = parse_config("# comment\nphysics.alpha = 0.5\n\ngrid.n = 200   # trailing\n");
    CHECK(c.op.alpha() == 0.5);
    CHECK(c.n == 200);
    CHECK(parse_config("physics.alpha = friedrichs").op.is_friedrichs());
    CHECK_THROWS_AS(parse_config("physics.s = 0.5"), RangeError);
    CHECK_THROWS_AS(parse_config("solver.dt = -0.1"), RangeError);
    CHECK_THROWS_AS(parse_config("grid.n = 301"), RangeError);
    try {
        parse_config("physics.alpha = 1\n\nphysics.alpah = 2\n");
        FAIL("unknown key accepted");
    } catch (const ParseError& e) {
        CHECK(e.line == 3);
        CHECK(std::string(e.what()).find("physics.alpah") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_config("grid.n = 2x"), ParseError);
    CHECK_THROWS_AS(parse_config("just words"), ParseError);
}

TEST_CASE("field specs")
{
    auto c = parse_config("physics.potential = green(2)\nphysics.datum = gaussian(0.5, 3)\n");
    CHECK(c.potential.kind == "green");
    CHECK(c.potential.arg(0, 0) == 2.0);
    CHECK(c.datum.arg(1, 0) == 3.0);
    CHECK_THROWS_AS(parse_config("physics.potential = banana(1)"), ParseError);
    CHECK_THROWS_AS(parse_config("physics.datum = file(/nonexistent/x.csv)"), RangeError);
    RadialGrid g(10.0, 100);
    auto w = make_potential(parse_config("physics.potential = inverse_power(1, 5)").potential, g);
    CHECK(w.singular_exponent == 1.0);
    CHECK(w.profile[50].real() == doctest::Approx(1 / g.r(50)));
    CHECK(std::abs(w.profile[99]) == 0.0);
}

TEST_CASE("field CSV round trip")
{
    auto dir = scratch("csv");
    auto p = dir / "f.csv";
    {
        std::ofstream o(p);
        o << "# seed=1\nr,re,im\n0,0,0\n1,1,0.5\n20,0,0\n";
    }
    auto rows = read_field_csv(p.string());
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].second == cplx(1, 0.5));
    RadialGrid g(10.0, 100);
    auto f = make_datum(FieldSpec{"file", {}, p.string()}, g);
    CHECK(f[5] == cplx(0.5, 0.25));
    {
        std::ofstream o(dir / "bad.csv");
        o << "x,y\n1,2\n";
    }
    CHECK_THROWS(read_field_csv((dir / "bad.csv").string()));
}

TEST_CASE("evolve with w = 0 writes the monitor CSV")
{
    auto dir = scratch("evolve");
    auto r = call({"evolve", "--physics.potential", "zero", "--solver.t_end=0.2", "--solver.dt", "0.01",
                   "--output.dir", dir.string()});
    CHECK_MESSAGE(r.code == 0, r.err);
    auto csv = slurp(dir / "sh_monitors.csv");
    std::istringstream in(csv);
    std::string line, header;
    bool seed = false;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) == 0) {
            seed = seed || line.find("seed=") != std::string::npos;
            continue;
        }
        header = line;
        break;
    }
    CHECK(seed);
    CHECK(header == "t,mass,energy,h_s_norm,l2_norm,lr_norm,tail_mass");
    CHECK(fs::exists(dir / "sh_evolve.json"));
}

TEST_CASE("picard with an oversized window is a physics failure")
{
    auto dir = scratch("picard");
    auto r = call({"picard", "--physics.potential", "gaussian(1, 2)", "--solver.window", "20", "--output.dir",
                   dir.string()});
    CHECK(r.code == 2);
    auto j = sh::json::parse(r.err);
    CHECK(j["kind"] == "non_contraction");
    CHECK(j["exit_code"] == 2);
}

TEST_CASE("usage errors")
{
    CHECK(call({"frobnicate"}).code == 1);
    CHECK(call({}).code == 1);
    auto r = call({"evolve", "--physics.s", "0.5"});
    CHECK(r.code == 1);
    CHECK(sh::json::parse(r.err)["status"] == "error");
    CHECK(call({"evolve", "--physics.nonsense", "1"}).code == 1);
    CHECK(call({"evolve", "--config", "/nonexistent/cfg.txt"}).code == 1);
    CHECK(call({"evolve", "--physics.alpha"}).code == 1);
}

TEST_CASE("SH_THREADS must be a positive integer")
{
    ::setenv("SH_THREADS", "lots", 1);
    CHECK_THROWS_AS(thread_cap(), RangeError);
    CHECK(call({"norms", "--output.dir", scratch("threads").string()}).code == 1);
    ::setenv("SH_THREADS", "3", 1);
    CHECK(thread_cap() == 3);
    ::unsetenv("SH_THREADS");
    CHECK(thread_cap() == 1);
}

TEST_CASE("command line overrides the config file")
{
    auto dir = scratch("override");
    auto cfg = dir / "run.cfg";
    {
        std::ofstream o(cfg);
        o << "physics.alpha = 3\nphysics.potential = zero\nsolver.t_end = 0.1\nsolver.dt = 0.01\noutput.dir = "
          << dir.string() << "\n";
    }
    REQUIRE(call({"evolve", "-c", cfg.string(), "--physics.alpha", "0.25"}).code == 0);
    auto j = sh::json::parse(slurp(dir / "sh_evolve.json"));
    CHECK(j["alpha"] == PointInteraction(0.25).label());
}

TEST_CASE("outputs are byte-identical across runs")
{
    std::vector<std::string> outs;
    for (int k = 0; k < 2; ++k) {
        auto dir = scratch("det" + std::to_string(k));
        auto r = call({"stability", "--solver.t_end", "0.5", "--solver.dt", "0.02", "--output.dir", dir.string()});
        REQUIRE_MESSAGE(r.code == 0, r.err);
        std::vector<fs::path> files(fs::directory_iterator(dir), {});
        std::sort(files.begin(), files.end());
        std::string all;
        for (auto& p : files) all += p.filename().string() + "\n" + slurp(p);
        outs.push_back(all);
    }
    CHECK(outs[0] == outs[1]);
    CHECK(!outs[0].empty());
}
