#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "fgsi/cli.hpp"

using namespace fgsi;
using namespace fgsi::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("fgsi_test_" + name)).string();
}

const std::vector<std::string> kOrbit{"--ic", "x=0,y=-2.02,py=0", "--energy", "1/120",
                                      "--closure", "px"};

std::vector<std::string> with_orbit(std::vector<std::string> args) {
  args.insert(args.end(), kOrbit.begin(), kOrbit.end());
  return args;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("numbers") {
    CHECK(parse_number("0.25") == 0.25);
    CHECK(parse_number("-2.02") == -2.02);
    CHECK(parse_number("1/120") == 1.0 / 120.0);
    CHECK(parse_number(" 1/12 ") == 1.0 / 12.0);
    CHECK(parse_number("pi") == std::numbers::pi);
    CHECK(parse_number("-pi/4") == -std::numbers::pi / 4);
    CHECK(parse_number("0.25pi") == 0.25 * std::numbers::pi);
    CHECK(parse_number("1e-8") == 1e-8);
    for (const char* bad : {"", "abc", "1/0", "1//2", "--1", "1e999", "pi/", "2x"})
      CHECK_THROWS_AS(parse_number(bad), Error);
  }

  TEST_CASE("assignments") {
    const auto a = parse_assignments("x=0, y=-2.02,py=1/2");
    REQUIRE(a.size() == 3);
    CHECK(a[1].first == "y");
    CHECK(a[2].second == 0.5);
    CHECK(parse_assignments("").empty());
    CHECK_THROWS_AS(parse_assignments("x=1,x=2"), Error);
    CHECK_THROWS_AS(parse_assignments("x"), Error);
    CHECK_THROWS_AS(parse_assignments("=3"), Error);
  }

  TEST_CASE("format") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-2.5) == "-2.5");
  }

  TEST_CASE("integrate writes one row per sample") {
    const Run r = run_cli(with_orbit({"integrate", "--steps", "10", "--sample-every", "5"}));
    REQUIRE(r.code == kOk);
    std::istringstream in(r.out);
    const CsvTable t = read_csv(in);
    CHECK(t.header == std::vector<std::string>{"t", "x", "y", "px", "py", "H", "dH"});
    REQUIRE(t.rows.size() == 3);
    CHECK(t.number(2, 0) == doctest::Approx(1.0));
    CHECK(t.number(0, 5) == doctest::Approx(1.0 / 120.0));
    CHECK(r.out.find('\r') == std::string::npos);
  }

  TEST_CASE("csv round trip is byte identical") {
    const Run r = run_cli(with_orbit({"integrate", "--scheme", "chin4", "--steps", "50"}));
    REQUIRE(r.code == kOk);
    std::istringstream in(r.out);
    std::ostringstream again;
    write_csv(again, read_csv(in));
    CHECK(again.str() == r.out);

    CsvTable q;
    q.header = {"a", "b"};
    q.rows = {{"x,y", "say \"hi\""}};
    std::ostringstream os;
    write_csv(os, q);
    std::istringstream is(os.str());
    const CsvTable back = read_csv(is);
    CHECK(back.rows == q.rows);
  }

  TEST_CASE("flags override config keys") {
    const std::string cfg = temp_path("precedence.cfg");
    {
      std::ofstream f(cfg);
      f << "# test\nscheme = fr4\ntau=0.05\nsteps=4\n";
    }
    const Run a = run_cli(with_orbit({"integrate", "--config", cfg}));
    REQUIRE(a.code == kOk);
    std::istringstream ia(a.out);
    const CsvTable ta = read_csv(ia);
    CHECK(ta.rows.size() == 5);
    CHECK(ta.number(4, 0) == doctest::Approx(0.2));

    const Run b = run_cli(with_orbit({"integrate", "--config", cfg, "--steps", "2"}));
    REQUIRE(b.code == kOk);
    std::istringstream ib(b.out);
    const CsvTable tb = read_csv(ib);
    CHECK(tb.rows.size() == 3);
    CHECK(tb.number(2, 0) == doctest::Approx(0.1));

    {
      std::ofstream f(cfg);
      f << "warp=9\n";
    }
    const Run c = run_cli(with_orbit({"integrate", "--config", cfg, "--steps", "2"}));
    CHECK(c.code == kConfigError);
    CHECK(c.err.find("warp") != std::string::npos);
    std::remove(cfg.c_str());
  }

  TEST_CASE("exit codes") {
    CHECK(run_cli(with_orbit({"integrate", "--steps", "0"})).code == kConfigError);
    const Run bad = run_cli(with_orbit({"integrate", "--scheme", "euler", "--steps", "3"}));
    CHECK(bad.code == kConfigError);
    CHECK(bad.err.find("omf4gp") != std::string::npos);
    CHECK(run_cli({"integrate", "--steps", "3"}).code == kConfigError);
    CHECK(run_cli({"frobnicate"}).code == kConfigError);
    CHECK(run_cli({"integrate", "--system", "spring", "--ic", "r=3,phi=0", "--energy", "1/12",
                   "--closure", "pr", "--steps", "2"})
              .code == kConfigError);
    CHECK(run_cli({"integrate", "--ic", "x=0,y=5,px=3,py=3", "--tau", "0.5", "--steps", "100000"})
              .code == kNumericalFailure);
    CHECK(exit_code_for(ErrorKind::Singularity) == kNumericalFailure);
    CHECK(exit_code_for(ErrorKind::InfeasibleEnergy) == kConfigError);
    CHECK(run_cli({"--help"}).code == kOk);
  }

  TEST_CASE("summary rows") {
    const Run c = run_cli(with_orbit({"convergence", "--scheme", "grad2", "--taus", "0.1,0.05",
                                      "--t-end", "2"}));
    REQUIRE(c.code == kOk);
    CHECK(c.out.find("\nslope,") != std::string::npos);

    const Run z = run_cli({"zero-one", "--system", "spring", "--ic", "r=1.15,phi=0.2pi,pr=0",
                           "--energy", "1/12", "--closure", "pphi", "--t-max", "100",
                           "--window", "1000", "--lags", "20"});
    REQUIRE(z.code == kOk);
    CHECK(z.out.find("\nLambda,") != std::string::npos);

    const Run d = run_cli(with_orbit({"detcheck", "--scheme", "grad2", "--steps", "10"}));
    REQUIRE(d.code == kOk);
    CHECK(d.out.rfind("t,det_minus_1\n", 0) == 0);
  }

  TEST_CASE("table entries") {
    const auto entries = table_entries();
    int t1 = 0, t2 = 0, t4 = 0;
    for (const auto& e : entries) {
      t1 += e.table == 1;
      t2 += e.table == 2;
      t4 += e.table == 4;
    }
    CHECK(t1 == 18);
    CHECK(t2 == 16);
    CHECK(t4 == 17);
  }
}
