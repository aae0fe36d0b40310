#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "ymflow/config.hpp"

using namespace ymflow::config;

TEST_CASE("parse flat section.key lines") {
    const auto cfg = Config::parse_text(
        "# a comment\n"
        "sim.t0 = 100\n"
        "sim.horizon = 1e3\n"
        "theta0.family = powerlog   # trailing comment\n"
        "theta0.a = 0.5\n"
        "theta0.sign = -1\n"
        "\n"
        "stepper.rtol=1e-8\n");
    CHECK(cfg.has("sim.t0"));
    CHECK(cfg.get_double("sim.t0") == 100.0);
    CHECK(cfg.get_double("sim.horizon") == 1000.0);
    CHECK(cfg.get_string("theta0.family") == "powerlog");
    CHECK(cfg.get_int("theta0.sign") == -1);
    CHECK(cfg.get_double("stepper.rtol") == 1e-8);
    CHECK(!cfg.has("missing.key"));
    CHECK(cfg.get_double("missing.key", 7.5) == 7.5);
    CHECK(cfg.get_string("missing.key", "x") == "x");
}

TEST_CASE("parse errors carry position") {
    bool threw = false;
    try {
        Config::parse_text("sim.t0 = 1\nnot-a-kv-line\n", "test.cfg");
    } catch (const ParseError& e) {
        threw = true;
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("test.cfg") != std::string::npos);
    }
    CHECK(threw);

    CHECK_THROWS_AS(Config::parse_file("does_not_exist_0192.cfg"), std::exception);

    const auto cfg = Config::parse_text("a.b = not_a_number\n");
    CHECK_THROWS_AS(cfg.get_double("a.b"), std::exception);
    CHECK_THROWS_AS(cfg.get_double("nope.nope"), std::exception);
}

TEST_CASE("set overrides") {
    auto cfg = Config::parse_text("sim.t0 = 100\n");
    cfg.set("sim.t0", "250");
    CHECK(cfg.get_double("sim.t0") == 250.0);
    cfg.set("new.key", "1");
    CHECK(cfg.get_bool("new.key"));
}

TEST_CASE("file round trip") {
    const std::string path = "config_test_tmp.cfg";
    {
        std::ofstream os(path);
        os << "sim.t0 = 42\ntheta0.a = 0.25\n";
    }
    const auto cfg = Config::parse_file(path);
    CHECK(cfg.get_double("sim.t0") == 42.0);
    std::remove(path.c_str());
}

TEST_CASE("theta0 from config") {
    const auto cfg = Config::parse_text(
        "theta0.family = oscillatory\n"
        "theta0.a = 0.4\n"
        "theta0.amplitude = 2.0\n");
    const auto spec = theta0_from_config(cfg);
    CHECK(spec.family == ymflow::profiles::Theta0Family::OscillatoryExplicit);
    CHECK(spec.a == 0.4);
    CHECK(spec.amplitude == 2.0);

    const auto dflt = theta0_from_config(Config::parse_text(""));
    CHECK(dflt.family == ymflow::profiles::Theta0Family::PowerLog);
    CHECK(dflt.a == 0.5);

    const auto bad = Config::parse_text("theta0.family = nosuchfamily\n");
    CHECK_THROWS_AS(theta0_from_config(bad), std::exception);
}
