#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ffsplit/config.hpp"
#include "ffsplit/io.hpp"
#include "ffsplit/runner.hpp"

using namespace ffsplit;

TEST_CASE("minimal config gets the paper-scale defaults") {
    const ScenarioConfig c = parse_config(R"({"protocol": "two_bump"})");
    CHECK(c.units.mass_kg == doctest::Approx(1.44e-25));
    CHECK(c.units.omega_rad_s == doctest::Approx(780.0));
    // t_f = 320 ms at omega = 780 rad/s -> 249.6
    CHECK(c.t_f == doctest::Approx(249.6).epsilon(1e-12));
    // a = 4 um over a_ho = 0.96897 um -> 4.128
    CHECK(c.units.oscillator_length_m() == doctest::Approx(0.96897e-6).epsilon(1e-4));
    CHECK(c.a == doctest::Approx(4.1281).epsilon(5e-4));
    CHECK(std::abs(c.a - 4.126) < 0.01);
    CHECK(c.lambdas.size() == 1);
    CHECK(c.lambdas[0] == 0.0);
    CHECK(c.n_x == 513);
    CHECK(c.deterministic);
}

TEST_CASE("unit conversions are mutually inverse") {
    const Units u;
    for (double v : {1e-6, 3.7e-3, 1.0, 42.0}) {
        CHECK(u.length_to_si(u.length_from_si(v)) == doctest::Approx(v).epsilon(1e-12));
        CHECK(u.time_to_si(u.time_from_si(v)) == doctest::Approx(v).epsilon(1e-12));
        CHECK(u.energy_to_si(u.energy_from_si(v)) == doctest::Approx(v).epsilon(1e-12));
    }
}

TEST_CASE("config rejects unknown keys, bad units, missing protocol") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"protocol": "two_bump", "bogus": 1})"),
                         doctest::Contains("bogus"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config(R"({})"), doctest::Contains("protocol"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"protocol": "nope"})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"protocol": "two_bump", "a": {"value": 1, "unit": "ms"}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"protocol": "two_bump", "resolution": {"n_x": 512}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"protocol": "two_bump", "deterministic": false})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_config("not json"), ConfigError);
}

TEST_CASE("config round-trip is the identity") {
    const std::string text = R"({
        "protocol": "bec",
        "a": {"value": 3.5, "unit": "um"},
        "t_f": {"value": 100, "unit": "ms"},
        "gN": 1.38,
        "lambda": [0.0, 0.01, 0.02],
        "resolution": {"n_x": 257, "prop_steps": 8192},
        "two_mode": true
    })";
    const ScenarioConfig a = parse_config(text);
    const ScenarioConfig b = parse_config(serialize_config(a));
    CHECK(a.protocol == b.protocol);
    CHECK(a.a == doctest::Approx(b.a).epsilon(1e-15));
    CHECK(a.t_f == doctest::Approx(b.t_f).epsilon(1e-15));
    CHECK(a.coupling == b.coupling);
    CHECK(a.lambdas == b.lambdas);
    CHECK(a.n_x == b.n_x);
    CHECK(a.prop_steps == b.prop_steps);
    CHECK(a.two_mode == b.two_mode);
    CHECK(serialize_config(a) == serialize_config(b));
}

TEST_CASE("sweep csv carries the exact header and stable formatting") {
    FidelityReport r;
    r.lambda = 1e-3;
    r.t_f = 249.6;
    r.F_S = 0.7071067811;
    r.F_D0 = 0.99;
    r.F_D = 0.5;
    r.F_I = 1.0;
    const auto dir = std::filesystem::temp_directory_path() / "ffsplit_io_test";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "sweep.csv").string();
    write_sweep_csv({r}, path);
    write_sweep_csv({r}, path + ".again");

    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header ==
          "lambda,tf,gN,F_S,F_D0,F_D,F_I,F_S_2m,F_D0_2m,F_D_2m,sudden_metric,adiabatic_metric");
    CHECK(row == "0.001,249.6,0,0.7071067811,0.99,0.5,1,,,,,");

    std::stringstream s1, s2;
    s1 << std::ifstream(path).rdbuf();
    s2 << std::ifstream(path + ".again").rdbuf();
    CHECK(s1.str() == s2.str());
    std::filesystem::remove_all(dir);
}

TEST_CASE("binary trace layout") {
    const Grid g(2.0, 5);
    PotentialTrace tr(g, TimeMesh(1.0, 2));
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 5; ++i) tr.at(k, i) = 10.0 * k + i;
    const auto dir = std::filesystem::temp_directory_path() / "ffsplit_io_test_bin";
    std::filesystem::create_directories(dir);
    const std::string path = (dir / "trace.bin").string();
    write_trace_bin(tr, path);

    std::ifstream in(path, std::ios::binary);
    std::int64_t nt = 0, nx = 0;
    in.read(reinterpret_cast<char*>(&nt), 8);
    in.read(reinterpret_cast<char*>(&nx), 8);
    CHECK(nt == 3);
    CHECK(nx == 5);
    std::vector<double> vals(15);
    in.read(reinterpret_cast<char*>(vals.data()), 15 * 8);
    CHECK(in.good());
    CHECK(vals[0] == 0.0);
    CHECK(vals[7] == 12.0);
    CHECK(vals[14] == 24.0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("resolution scaling keeps the grid odd") {
    ScenarioConfig c = parse_config(R"({"protocol": "two_bump"})");
    const ScenarioConfig half = scaled(c, 0.5);
    CHECK(half.n_x % 2 == 1);
    CHECK(half.n_x < c.n_x);
    CHECK(half.prop_steps == c.prop_steps / 2);
    const ScenarioConfig same = scaled(c, 1.0);
    CHECK(same.n_x == c.n_x);
}
