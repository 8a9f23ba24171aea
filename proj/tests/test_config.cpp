#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rbsim/config.hpp"

using namespace rbsim;

namespace {

ConfigFile parse(const std::string& text) { return parse_config_text(text, "/cfg", "test.toml"); }

}  // namespace

TEST_CASE("defaults and overrides") {
    const ConfigFile empty = parse("");
    CHECK(empty.solver.n == SolverConfig{}.n);
    CHECK_FALSE(empty.solver.dt.has_value());
    CHECK(empty.sweep.empty());

    const ConfigFile c = parse(R"(
n = 64
symbol = "loglog:mu2=0.5"
dt = 0.01
t_end = 0.5
record_every = 3
seed = 9
transport_p = 4
[ic]
kind = "random_band"
amplitude = 2
file = "state.csv"
[physics]
source = false
)");
    CHECK(c.solver.n == 64);
    CHECK(c.solver.symbol == "loglog:mu2=0.5");
    CHECK(*c.solver.dt == 0.01);
    CHECK(c.solver.record_every == 3);
    CHECK(c.solver.seed == 9);
    CHECK(c.solver.transport_p == 4.0);
    CHECK(c.solver.ic.kind == ICSpec::Kind::random_band);
    CHECK(c.solver.ic.amplitude == 2.0);
    CHECK(c.solver.ic.file == "/cfg/state.csv");
    CHECK_FALSE(c.solver.physics.source);
    CHECK(c.solver.physics.advection);
    CHECK_FALSE(parse("dt = \"auto\"").solver.dt.has_value());
    CHECK(std::isinf(parse("transport_p = \"inf\"").solver.transport_p));
}

TEST_CASE("malformed files are rejected") {
    CHECK_THROWS_AS(parse("n = "), ConfigError);
    CHECK_THROWS_AS(parse("nn = 64"), ConfigError);
    CHECK_THROWS_AS(parse("n = 64.5"), ConfigError);
    CHECK_THROWS_AS(parse("n = 63"), ConfigError);
    CHECK_THROWS_AS(parse("dt = \"fast\""), ConfigError);
    CHECK_THROWS_AS(parse("dt = -1.0"), ConfigError);
    CHECK_THROWS_AS(parse("symbol = \"power:s=1\""), ConfigError);
    CHECK_THROWS_AS(parse("[ic]\nkind = \"vortex\""), ConfigError);
    CHECK_THROWS_AS(parse("[ic]\nshape = 1"), ConfigError);
    CHECK_THROWS_AS(parse("[physics]\nadvection = 1"), ConfigError);
    CHECK_THROWS_AS(parse("[sweep]\nn = []"), ConfigError);
    CHECK_THROWS_AS(parse("[sweep]\nseed = [1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse("seed = -3"), ConfigError);
    CHECK_THROWS_AS(parse_config_file("/nonexistent/config.toml"), ConfigError);
    try {
        parse("t_end = 1\nbogus = 2");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("bogus") != std::string::npos);
    }
}

TEST_CASE("the resolved rendering parses back to the same configuration") {
    SolverConfig c;
    c.n = 64;
    c.dt = 1.0 / 3.0;
    c.symbol = "log:mu1=0.5";
    c.ic.kind = ICSpec::Kind::random_band;
    c.ic.k_hi = 5.5;
    c.physics.buoyancy = false;
    const std::string text = to_toml(c);
    const SolverConfig back = parse(text).solver;
    CHECK(to_toml(back) == text);
    CHECK(*back.dt == *c.dt);
    CHECK(back.ic.k_hi == 5.5);
    CHECK_FALSE(back.physics.buoyancy);
}

TEST_CASE("sweep expansion") {
    const ConfigFile f = parse(R"(
t_end = 0.1
[sweep]
symbol = ["constant:c0=1", "log:mu1=0.5", "log:mu1=1"]
n = [64, 128]
)");
    const auto runs = expand_sweep(f);
    REQUIRE(runs.size() == 6);
    CHECK(runs[0].symbol == "constant:c0=1");
    CHECK(runs[0].n == 64);
    CHECK(runs[1].n == 128);
    CHECK(runs[5].symbol == "log:mu1=1");
    CHECK(runs[5].t_end == 0.1);

    CHECK(expand_sweep(parse("n = 32")).size() == 1);
    const auto dts = expand_sweep(parse("[sweep]\ndt = [\"auto\", 0.01]\namplitude = [1, 2]"));
    REQUIRE(dts.size() == 4);
    CHECK_FALSE(dts[0].dt.has_value());
    CHECK(dts[1].ic.amplitude == 2.0);
    CHECK(*dts[2].dt == 0.01);
}
