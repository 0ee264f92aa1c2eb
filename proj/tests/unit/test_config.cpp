#include <doctest.h>

#include <string>

#include "hawkes/config.hpp"
#include "hawkes/errors.hpp"

using namespace hawkes;

namespace {

std::size_t error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        const std::string what = e.what();
        const auto pos = what.find("line ");
        REQUIRE(pos != std::string::npos);
        return std::stoul(what.substr(pos + 5));
    }
    FAIL("expected ConfigError");
    return 0;
}

}  // namespace

TEST_CASE("TOML subset values") {
    const auto doc = parse_toml("# top\n[a]\ns = \"x\\\"y\" # trailing\ni = 1_000\nf = 2.5e-1\nb = true\nv = [1, 2.5, -3]\n");
    const auto& a = doc.at("a");
    CHECK(std::get<std::string>(a.at("s").data) == "x\"y");
    CHECK(std::get<std::int64_t>(a.at("i").data) == 1000);
    CHECK(std::get<double>(a.at("f").data) == 0.25);
    CHECK(std::get<bool>(a.at("b").data));
    CHECK(std::get<TomlValue::Array>(a.at("v").data) == TomlValue::Array{1.0, 2.5, -3.0});
    CHECK(a.at("v").line == 7);
}

TEST_CASE("TOML syntax errors carry the line number") {
    CHECK(error_line("[run]\nhorizon = 10\nhorizon = 20\n") == 3);
    CHECK(error_line("\n\n[run\n") == 3);
    CHECK(error_line("horizon = 1\n") == 1);
    CHECK(error_line("[run]\nseed = \"abc\n") == 2);
    CHECK(error_line("[run]\nseed = [1, , 2]\n") == 2);
    CHECK(error_line("[run]\n[run]\n") == 2);
    CHECK(error_line("[[run]]\n") == 1);
}

TEST_CASE("schema errors carry the line number") {
    CHECK(error_line("[run]\nhorizon = 10\nbogus = 1\n") == 3);
    CHECK(error_line("\n[nonsense]\n") == 2);
    CHECK(error_line("[run]\nreplications = -5\n") == 2);
    CHECK(error_line("[kernel]\nfamily = \"exponential\"\nc = 1.0\n") == 3);
    CHECK(error_line("[kernel]\nfamily = \"gaussian\"\n") == 2);
    CHECK(error_line("[fclt]\ngrid = 11\ns_points = [0.25]\n") == 3);
}

TEST_CASE("defaults") {
    const auto cfg = parse_config("");
    CHECK(cfg == RunConfig{});
    CHECK(cfg.run.horizon == 2000.0);
    CHECK(cfg.run.replications == 1000);
    CHECK(cfg.fclt.s_points == std::vector<double>{0.25, 0.5, 0.75, 1.0});
    CHECK(cfg.model().contraction() == doctest::Approx(0.5));
}

TEST_CASE("serialize round-trips") {
    RunConfig cfg;
    cfg.kernel = {"power-law", 1.0, 2.0, 0.3, 3.7, 1.0 / 3.0};
    cfg.rate = {"saturating", 0.1 + 0.2, 0.4, 1.0};
    cfg.run.horizon = 123.456;
    cfg.run.seed = kMaxSeed;
    cfg.run.compensator_step = 0.5;
    cfg.fclt.grid = 11;
    cfg.fclt.s_points = {0.1, 0.5, 1.0};
    cfg.lil.s2_mode = "empirical";
    cfg.output_dir = "out/a \"quoted\" dir";
    CHECK(parse_config(serialize_config(cfg)) == cfg);

    RunConfig canned;
    canned.scenario = "nonlinear-saturating";
    std::tie(canned.kernel, canned.rate) = scenario_model("nonlinear-saturating");
    CHECK(parse_config(serialize_config(canned)) == canned);
}

TEST_CASE("scenario implies the model") {
    const auto cfg = parse_config("[verify]\nscenario = \"poisson\"\n");
    CHECK(cfg.kernel.family == "zero");
    CHECK(cfg.rate.nu == 2.0);
    const auto sat = parse_config("[verify]\nscenario = \"nonlinear-saturating\"\n").model();
    CHECK(sat.contraction() == doctest::Approx(0.4));
    CHECK(error_line("[verify]\nscenario = \"linear\"\n[kernel]\nfamily = \"exponential\"\na = 1.5\nb = 2.0\n") == 4);
    CHECK(error_line("[verify]\nscenario = \"other\"\n") == 2);
}

TEST_CASE("model validation propagates from the config") {
    const auto cfg = parse_config("[kernel]\nfamily = \"exponential\"\na = 3.0\nb = 2.0\n");
    CHECK_THROWS_AS(cfg.model(), StabilityViolation);
}
