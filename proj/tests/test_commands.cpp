#include <stdexcept>

#include "bench_nets.hpp"
#include "doctest.h"
#include "seccap/capacity.hpp"
#include "seccap/commands.hpp"

using namespace seccap;

namespace {

RunConfig y_cfg() {
    RunConfig cfg;
    cfg.net = bench::y_net();
    return cfg;
}

}  // namespace

TEST_CASE("parse_config: minimal config and defaults") {
    auto cfg = parse_config(R"({"topology":"y","links":[
        {"delta":0.2,"delta_e":0.05},{"delta":0.3,"delta_e":0.05},{"delta":0.25,"delta_e":0.05}]})");
    CHECK(cfg.net.topology == Topology::y);
    CHECK(cfg.net.channels.size() == 3);
    CHECK(cfg.angles == 64);
    CHECK(cfg.seed == 0);
    CHECK(cfg.margin == doctest::Approx(0.95));
    CHECK(cfg.n == 100000);
}

TEST_CASE("parse_config: errors name the offending key") {
    // ry without d0
    try {
        parse_config(R"({"topology":"ry","links":[
            {"delta":0.1,"delta_e":0.1},{"delta":0.2,"delta_e":0.05},{"delta":0.3,"delta_e":0.15}]})");
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("d0") != std::string::npos);
    }
    // unknown key
    try {
        parse_config(R"({"topology":"y","links":[],"horizon":5})");
        FAIL("expected a throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("horizon") != std::string::npos);
    }
    // probability out of range
    CHECK_THROWS_AS(parse_config(R"({"topology":"y","links":[
        {"delta":1.5,"delta_e":0.05},{"delta":0.3,"delta_e":0.05},{"delta":0.25,"delta_e":0.05}]})"),
                    std::invalid_argument);
    CHECK_THROWS_AS(parse_config("not json"), std::invalid_argument);
    CHECK_THROWS_AS(parse_config(R"({"topology":"y","links":[],"weights":[0,0]})"),
                    std::invalid_argument);
}

TEST_CASE("parse_config: five-link x configuration round-trips") {
    const std::string text = R"({"topology":"x","links":[
        {"delta":0.1,"delta_e":0.1},{"delta":0.2,"delta_e":0.05},{"delta":0.3,"delta_e":0.15},
        {"delta":0.4,"delta_e":0.35},{"delta":0.5,"delta_e":0.2}],
        "angles":16,"weights":[1,1],"n":5000,"seed":3,"margin":0.9,"mode":"field","out":"x.csv"})";
    auto cfg = parse_config(text);
    CHECK(cfg.net.topology == Topology::x);
    REQUIRE(cfg.net.channels.size() == 5);
    CHECK(cfg.net.channels[3].delta == doctest::Approx(0.4));
    CHECK(cfg.net.channels[3].delta_e == doctest::Approx(0.35));
    CHECK(cfg.angles == 16);
    CHECK(cfg.n == 5000);
    CHECK(cfg.seed == 3);
    CHECK(cfg.mode.has_value());
    CHECK(*cfg.mode == SimMode::field);
    CHECK(cfg.out == "x.csv");
}

TEST_CASE("cmd_region emits a stable, feasible frontier") {
    RunConfig cfg = y_cfg();
    cfg.angles = 16;
    auto a = cmd_region(cfg);
    auto b = cmd_region(cfg);
    CHECK(a.code == exit_ok);
    CHECK(a.output == b.output);  // byte-stable
    CHECK(a.output.rfind("r1,r2,k1,k2,k3\n", 0) == 0);
    CHECK(a.output.find("nan") == std::string::npos);

    // degenerate: perfect eavesdroppers everywhere -> the single row (0, 0)
    RunConfig dead = y_cfg();
    for (auto& ch : dead.net.channels) ch.delta_e = 0.0;
    auto d = cmd_region(dead);
    CHECK(d.code == exit_ok);
    CHECK(d.output == "r1,r2,k1,k2,k3\n0,0,0,0,0\n");
}

TEST_CASE("cmd_region produces an SVG when asked") {
    RunConfig cfg = y_cfg();
    cfg.angles = 8;
    cfg.svg = "plot.svg";
    auto res = cmd_region(cfg);
    CHECK(res.code == exit_ok);
    CHECK(res.svg.rfind("<svg", 0) == 0);
    CHECK(res.svg.find("polyline") != std::string::npos);
}

TEST_CASE("cmd_compare reports dominance ratios") {
    RunConfig cfg = y_cfg();
    cfg.angles = 12;
    auto res = cmd_compare(cfg);
    CHECK(res.code == exit_ok);
    CHECK(res.output.rfind("row,w1,w2,capacity,link_sharing,path_sharing,ratio_link,ratio_path\n",
                           0) == 0);
    CHECK(res.output.find("\nmin,") != std::string::npos);
    CHECK(res.output.find("\nmax,") != std::string::npos);
    // every ratio >= 1 - 1e-9: parse the ratio columns
    std::size_t pos = res.output.find('\n') + 1;
    while (pos < res.output.size()) {
        std::size_t end = res.output.find('\n', pos);
        std::string line = res.output.substr(pos, end - pos);
        pos = end + 1;
        if (line.rfind("min,", 0) == 0 || line.rfind("max,", 0) == 0) continue;
        std::size_t comma = std::string::npos;
        int field = 0;
        std::size_t start = 0;
        for (int f = 0; f < 6; ++f) start = line.find(',', start) + 1;
        comma = line.find(',', start);
        const double ratio_link = std::stod(line.substr(start, comma - start));
        CHECK(ratio_link >= 1.0 - 1e-9);
        (void)field;
    }
}

TEST_CASE("cmd_simulate returns a JSON report and honours flags") {
    RunConfig cfg = y_cfg();
    cfg.n = 20000;
    cfg.seed = 4;
    auto res = cmd_simulate(cfg);
    CHECK(res.code == exit_ok);
    CHECK(res.output.find("\"rates\"") != std::string::npos);
    CHECK(res.output.find("\"operating_point\"") != std::string::npos);

    RunConfig zero = y_cfg();
    zero.n = 0;
    auto rz = cmd_simulate(zero);
    CHECK(rz.code == exit_sim_flag);  // truncated
}

TEST_CASE("cmd_simulate merges multiple trials") {
    RunConfig cfg = y_cfg();
    cfg.n = 20000;
    cfg.trials = 3;
    auto res = cmd_simulate(cfg);
    CHECK(res.code == exit_ok);
    CHECK(res.output.find("\"trials\": 3") != std::string::npos);
}

TEST_CASE("cmd_verify checks every hypothesis and destination") {
    RunConfig cfg = y_cfg();
    cfg.n = 1200;
    cfg.margin = 0.9;
    cfg.seed = 11;
    auto res = cmd_verify(cfg);
    CHECK(res.code == exit_ok);
    CHECK(res.output.find("\"eavesdroppers\"") != std::string::npos);
    CHECK(res.output.find("\"secure\": false") == std::string::npos);
    CHECK(res.output.find("\"decodable\": true") != std::string::npos);

    RunConfig big = y_cfg();
    big.n = 20000;
    CHECK(cmd_verify(big).code == exit_bad_input);

    RunConfig wrong = y_cfg();
    wrong.n = 1000;
    wrong.mode = SimMode::counting;
    CHECK(cmd_verify(wrong).code == exit_bad_input);
}

TEST_CASE("cmd_verify flags the unsafe probe as insecure") {
    bool saw_insecure = false;
    for (std::uint64_t seed = 0; seed < 6 && !saw_insecure; ++seed) {
        RunConfig cfg = y_cfg();
        cfg.n = 900;
        cfg.margin = 0.9;
        cfg.seed = seed;
        cfg.unsafe_raw_keys = true;
        auto res = cmd_verify(cfg);
        if (res.code == exit_insecure) saw_insecure = true;
    }
    CHECK(saw_insecure);
}

TEST_CASE("cmd_simulate accepts an explicit rate point") {
    RunConfig cfg = y_cfg();
    cfg.n = 20000;
    cfg.point = {{0.001, 0.005}};
    auto res = cmd_simulate(cfg);
    CHECK(res.code == exit_ok);

    RunConfig outside = y_cfg();
    outside.point = {{0.5, 0.5}};
    CHECK(cmd_simulate(outside).code == exit_lp_failure);
}
