#include "doctest.h"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <string>

#include "uwac/config.hpp"

using namespace uwac;

namespace {

bool throws_config_error_containing(const std::string& text,
                                    const std::string& needle) {
    try {
        parse_run_config_text(text);
    } catch (const ConfigError& e) {
        return std::string(e.what()).find(needle) != std::string::npos;
    }
    return false;
}

}  // namespace

TEST_CASE("empty object parses to library defaults") {
    const RunConfig cfg = parse_run_config_text("{}");
    CHECK(cfg.env.spreading_k == 1.5);
    CHECK(cfg.env.shipping_s == 0.5);
    CHECK(cfg.env.wind_w == 0.0);
    CHECK(cfg.solver.f_min_khz == 0.01);
    CHECK(cfg.solver.f_max_khz == 1000.0);
    CHECK(cfg.solver.grid_points == 2000);
    CHECK(cfg.solver.root_mode == SolverSettings::RootMode::bisection);
    CHECK(cfg.solver.quadrature == SolverSettings::Quadrature::trapezoid);
    CHECK(cfg.sweep.case_preset.empty());
    CHECK(cfg.sweep.has_axes == false);
    CHECK(cfg.sweep.threads == 0);
    CHECK(cfg.fit.power_a1_c_plus_one == false);
    CHECK(cfg.output_dir == "out");
}

TEST_CASE("fields override defaults") {
    const RunConfig cfg = parse_run_config_text(R"({
        "env": {"spreading_k": 2.0, "wind_w": 10.0},
        "solver": {"grid_points": 500, "root_mode": "epsilon_increment",
                   "quadrature": "simpson", "epsilon_db": 0.02},
        "sweep": {"case": "case2", "threads": 4},
        "fit": {"power_a1_c_plus_one": true},
        "output_dir": "results"
    })");
    CHECK(cfg.env.spreading_k == 2.0);
    CHECK(cfg.env.shipping_s == 0.5);
    CHECK(cfg.env.wind_w == 10.0);
    CHECK(cfg.solver.grid_points == 500);
    CHECK(cfg.solver.root_mode == SolverSettings::RootMode::epsilon_increment);
    CHECK(cfg.solver.quadrature == SolverSettings::Quadrature::simpson);
    CHECK(cfg.solver.epsilon_db == 0.02);
    CHECK(cfg.sweep.case_preset == "case2");
    CHECK(cfg.sweep.threads == 4);
    CHECK(cfg.fit.power_a1_c_plus_one == true);
    CHECK(cfg.output_dir == "results");
    const SweepSpec spec = cfg.sweep.make_spec();
    CHECK(spec.l_values_km.front() == 1.0);
    CHECK(spec.l_values_km.back() == 100.0);
}

TEST_CASE("unknown keys are rejected at every level") {
    CHECK(throws_config_error_containing(R"({"envv": {}})", "envv"));
    CHECK(throws_config_error_containing(R"({"env": {"foo": 1}})", "foo"));
    CHECK(throws_config_error_containing(R"({"solver": {"tol": 1}})", "tol"));
    CHECK(throws_config_error_containing(R"({"sweep": {"parallel": 2}})",
                                         "parallel"));
    CHECK(throws_config_error_containing(R"({"fit": {"shift": true}})", "shift"));
    CHECK(throws_config_error_containing(
        R"({"sweep": {"l_km": {"min": 1, "max": 2, "points": 3, "step": 1},
                      "c_kbps": {"min": 1, "max": 2, "points": 3}}})",
        "step"));
}

TEST_CASE("wrong value types are named") {
    CHECK(throws_config_error_containing(R"({"env": {"spreading_k": "big"}})",
                                         "number"));
    CHECK(throws_config_error_containing(R"({"solver": {"grid_points": 2.5}})",
                                         "integer"));
    CHECK(throws_config_error_containing(R"({"output_dir": 3})", "string"));
    CHECK(throws_config_error_containing(
        R"({"fit": {"power_a1_c_plus_one": 1}})", "boolean"));
    CHECK(throws_config_error_containing(R"({"env": []})", "object"));
    CHECK(throws_config_error_containing("[1, 2]", "object"));
    CHECK(throws_config_error_containing("{", "JSON"));
    CHECK(throws_config_error_containing(
        R"({"solver": {"root_mode": "newton"}})", "root_mode"));
    CHECK(throws_config_error_containing(
        R"({"solver": {"quadrature": "gauss"}})", "quadrature"));
    CHECK(throws_config_error_containing(
        R"({"sweep": {"l_km": {"min": 1, "max": 2, "points": 3,
                               "spacing": "cubic"},
                      "c_kbps": {"min": 1, "max": 2, "points": 3}}})",
        "spacing"));
}

TEST_CASE("semantic validation is wrapped as config errors") {
    // Out-of-range physics parameters surface as ConfigError, not the raw
    // domain_error the library throws.
    CHECK_THROWS_AS(parse_run_config_text(R"({"env": {"shipping_s": 2.0}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config_text(R"({"env": {"wind_w": -1.0}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config_text(R"({"solver": {"grid_points": 1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config_text(R"({"sweep": {"threads": -1}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_run_config_text(R"({"output_dir": ""})"), ConfigError);
    CHECK(throws_config_error_containing(
        R"({"sweep": {"l_km": {"min": 1, "max": 2, "points": 3}}})", "together"));
}

TEST_CASE("sweep grid resolution") {
    RunConfig cfg = parse_run_config_text(R"({"sweep": {"case": "case1"}})");
    const SweepSpec one = cfg.sweep.make_spec();
    CHECK(one.l_values_km.size() == 40);
    CHECK(one.l_values_km.front() == 0.1);

    cfg = parse_run_config_text(R"({
        "sweep": {"l_km": {"min": 1, "max": 3, "points": 3, "spacing": "linear"},
                  "c_kbps": {"min": 0.1, "max": 10, "points": 3}}
    })");
    const SweepSpec axes = cfg.sweep.make_spec();
    REQUIRE(axes.l_values_km.size() == 3);
    CHECK(axes.l_values_km[0] == 1.0);
    CHECK(axes.l_values_km[1] == 2.0);
    CHECK(axes.l_values_km[2] == 3.0);
    REQUIRE(axes.c_values_kbps.size() == 3);
    CHECK(axes.c_values_kbps[1] == doctest::Approx(1.0).epsilon(1e-12));

    cfg = parse_run_config_text(R"({"sweep": {"case": "case9"}})");
    CHECK_THROWS_AS(cfg.sweep.make_spec(), ConfigError);
    cfg = parse_run_config_text("{}");
    CHECK_THROWS_AS(cfg.sweep.make_spec(), ConfigError);

    // Preset and explicit axes are mutually exclusive.
    cfg = parse_run_config_text(R"({
        "sweep": {"case": "case1",
                  "l_km": {"min": 1, "max": 2, "points": 2},
                  "c_kbps": {"min": 1, "max": 2, "points": 2}}
    })");
    CHECK_THROWS_AS(cfg.sweep.make_spec(), ConfigError);
}

TEST_CASE("axis value generation") {
    AxisSpec axis;
    axis.min = 0.1;
    axis.max = 10.0;
    axis.points = 5;
    const std::vector<double> logv = axis.values();
    CHECK(logv.front() == 0.1);
    CHECK(logv.back() == 10.0);
    CHECK(logv[2] == doctest::Approx(1.0).epsilon(1e-12));

    axis.log_spacing = false;
    const std::vector<double> linv = axis.values();
    CHECK(linv[1] == doctest::Approx(2.575).epsilon(1e-12));

    axis.points = 1;
    CHECK_THROWS_AS(axis.values(), ConfigError);
    axis.points = 5;
    axis.max = axis.min;
    CHECK_THROWS_AS(axis.values(), ConfigError);
    axis.log_spacing = true;
    axis.min = -1.0;
    axis.max = 1.0;
    CHECK_THROWS_AS(axis.values(), std::domain_error);
}

TEST_CASE("config files load or fail loudly") {
    const std::string path = "test_config_tmp.json";
    {
        std::ofstream f(path);
        f << R"({"env": {"wind_w": 5.0}})";
    }
    const RunConfig cfg = load_run_config(path);
    CHECK(cfg.env.wind_w == 5.0);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_run_config("definitely_missing.json"), ConfigError);
}

TEST_CASE("hash bytes are stable known values") {
    CHECK(fnv1a64("") == 14695981039346656037ULL);
    CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
    CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("config hash tracks result-determining settings only") {
    const RunConfig base = parse_run_config_text("{}");
    const std::string h = config_hash(base);
    REQUIRE(h.size() == 16);
    for (char c : h) CHECK(std::isxdigit(static_cast<unsigned char>(c)));

    // Spelling out a default leaves the hash unchanged.
    CHECK(config_hash(parse_run_config_text(R"({"env": {"wind_w": 0.0}})")) == h);
    // Execution knobs do not perturb it either.
    CHECK(config_hash(parse_run_config_text(R"({"sweep": {"threads": 7}})")) == h);
    CHECK(config_hash(parse_run_config_text(R"({"output_dir": "elsewhere"})")) == h);

    // Every physics or numerics change lands in the hash.
    CHECK(config_hash(parse_run_config_text(R"({"env": {"wind_w": 1.0}})")) != h);
    CHECK(config_hash(parse_run_config_text(R"({"env": {"spreading_k": 2.0}})")) != h);
    CHECK(config_hash(parse_run_config_text(R"({"solver": {"grid_points": 1999}})")) !=
          h);
    CHECK(config_hash(parse_run_config_text(
              R"({"solver": {"quadrature": "simpson"}})")) != h);
    CHECK(config_hash(parse_run_config_text(R"({"sweep": {"case": "case1"}})")) != h);
    CHECK(config_hash(parse_run_config_text(
              R"({"fit": {"power_a1_c_plus_one": true}})")) != h);

    // Same settings, same hash, independent parse.
    CHECK(config_hash(parse_run_config_text(R"({"env": {"wind_w": 1.0}})")) ==
          config_hash(parse_run_config_text(R"({"env": {"wind_w": 1.0}})")));
}
