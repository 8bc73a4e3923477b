#include <cmath>
#include <cstdio>
#include <fstream>

#include <doctest.h>

#include "tpm/config.hpp"
#include "tpm/errors.hpp"
#include "tpm/jsonout.hpp"

using namespace tpm;

TEST_CASE("config parsing: sections, comments, defaults") {
    const RunConfig cfg = parse_config_text(R"(
# a comment
regime.delta = 2.0
regime.gamma = 1.5   # trailing comment
geometry.shape = disk
geometry.r = 0.25
geometry.n = 48
solver.rel_tol = 1e-9
)");
    CHECK(cfg.regime.delta == 2.0);
    CHECK(cfg.regime.gamma == 1.5);
    CHECK(cfg.regime.epsilon == 0.1); // default
    CHECK(cfg.shape.kind == ObstacleShape::Kind::Disk);
    CHECK(cfg.shape.ax == 0.25);
    CHECK(cfg.n == 48);
    CHECK(cfg.nz == 16);
    CHECK(cfg.solver.rel_tol == 1e-9);
    CHECK(cfg.m == 32);
}

TEST_CASE("config parsing: rejection paths") {
    CHECK_THROWS_AS(parse_config_text("bogus.key = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("regime.delta 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("regime.delta = abc\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("regime.delta = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("regime.epsilon = 1.5\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("geometry.shape = sphere\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("geometry.shape = disk\n"), ConfigError); // missing radius
    CHECK_THROWS_AS(parse_config_text("darcy.k11 = 1\n"), ConfigError);         // incomplete tensor
    CHECK_THROWS_AS(parse_config_text("macro.force = quadratic\n"), ConfigError);
}

TEST_CASE("json numbers round-trip losslessly") {
    const double values[] = {0.1, 1.0 / 3.0, 6.02e23, -1.2345678901234567e-8, 0.6605153469385864};
    for (double v : values) {
        Json j = Json::object();
        j.set("x", Json::number(v));
        const std::string text = j.dump();
        // parse the printed literal back
        const auto pos = text.find(": ");
        const double back = std::stod(text.substr(pos + 2));
        CHECK(back == v);
    }
}

TEST_CASE("permeability json round-trips through emit and parse") {
    PermeabilityTensor k;
    k.regime = Regime::VTPM;
    k.k[0][0] = 0.6605153469385864;
    k.k[0][1] = k.k[1][0] = -1.8828021232316611e-17;
    k.k[1][1] = 0.66051534693858641;
    k.n = 64;
    k.nz = 0;
    k.column_stats[0].rel_residual = 9.8e-11;
    k.column_stats[1].rel_residual = 9.4e-11;
    k.asymmetry = 1.2e-17;

    const std::string text = permeability_json(k).dump();
    const PermeabilityTensor back = permeability_from_json_text(text);
    CHECK(back.regime == Regime::VTPM);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(back.k[i][j] == k.k[i][j]); // bitwise
    CHECK(back.n == 64);
    CHECK(back.column_stats[1].rel_residual == k.column_stats[1].rel_residual);

    SUBCASE("re-emitting the parsed tensor reproduces the bytes") {
        CHECK(permeability_json(back).dump() == text);
    }
}

TEST_CASE("malformed permeability json is rejected") {
    CHECK_THROWS_AS(permeability_from_json_text("{"), ConfigError);
    CHECK_THROWS_AS(permeability_from_json_text(R"({"regime":"VTPM"})"), ConfigError);
    CHECK_THROWS_AS(permeability_from_json_text(R"({"regime":"XXX","k":[[1,0],[0,1]],"n":8,"nz":0})"),
                    ConfigError);
}

TEST_CASE("manufactured force matches the gradient-plus-rotation construction") {
    // div-free part has zero normal component on the boundary
    double fx = 0.0, fy = 0.0;
    manufactured_force(0.0, 0.37, fx, fy);
    double vx = 0.0, vy = 0.0;
    manufactured_velocity(0.0, 0.37, 1.0, vx, vy);
    CHECK(std::abs(vx) <= 1e-30);
    manufactured_velocity(0.42, 1.0, 1.0, vx, vy);
    CHECK(std::abs(vy) <= 1e-30); // sin(pi) only vanishes to roundoff
}
