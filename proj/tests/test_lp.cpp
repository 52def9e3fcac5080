#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "seccap/lp.hpp"

using namespace seccap;

namespace {

// max R s.t. k >= R (1-dE)/(1-d dE), R/(1-d) + k/((1-d) dE) <= 1, division-cleared.
LinearProgram single_link_lp(double d, double de) {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {1.0, 0.0};
    lp.add({1.0 - de, -(1.0 - d * de)}, Sense::le, 0.0);
    lp.add({de, 1.0}, Sense::le, (1.0 - d) * de);
    return lp;
}

}  // namespace

TEST_CASE("solve_lp: single active constraint") {
    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {1.0};
    lp.add({1.0}, Sense::le, 0.5);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sol.point[0] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("solve_lp: infeasible and unbounded detection") {
    LinearProgram bad;
    bad.num_vars = 1;
    bad.objective = {1.0};
    bad.add({1.0}, Sense::le, -1.0);  // x <= -1 with x >= 0
    CHECK(solve_lp(bad).status == SolveStatus::infeasible);

    LinearProgram unb;
    unb.num_vars = 2;
    unb.objective = {1.0, 0.0};
    unb.add({0.0, 1.0}, Sense::le, 1.0);
    CHECK(solve_lp(unb).status == SolveStatus::unbounded);
}

TEST_CASE("solve_lp: single-link secrecy LP vs grid search") {
    // frozen from the 1e-4 grid oracle below: max R = 3/14 at (d, dE) = (0.5, 0.5)
    auto sol = solve_lp(single_link_lp(0.5, 0.5));
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.value == doctest::Approx(3.0 / 14.0).epsilon(1e-9));

    double best = 0.0;
    const double d = 0.5, de = 0.5;
    for (double r = 0.0; r <= 1.0; r += 1e-4) {
        // minimal k and the time constraint, cleared forms
        const double k = r * (1.0 - de) / (1.0 - d * de);
        if (r * de + k <= (1.0 - d) * de + 1e-12) best = r;
    }
    CHECK(std::abs(sol.value - best) < 2e-4);
}

TEST_CASE("solve_lp: equality and >= constraints") {
    LinearProgram lp;
    lp.num_vars = 2;
    lp.objective = {0.0, 1.0};
    lp.add({1.0, 0.0}, Sense::eq, 0.25);
    lp.add({1.0, 1.0}, Sense::le, 1.0);
    lp.add({0.0, 1.0}, Sense::ge, 0.1);
    auto sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::optimal);
    CHECK(sol.value == doctest::Approx(0.75).epsilon(1e-9));
    CHECK(sol.point[0] == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("check_feasible basics") {
    LinearProgram empty;
    empty.num_vars = 2;
    empty.objective = {0, 0};
    std::vector<double> p{0.3, 0.4};
    CHECK(check_feasible(empty, p, 1e-9));

    LinearProgram lp;
    lp.num_vars = 1;
    lp.objective = {1.0};
    lp.add({1.0}, Sense::le, 0.5);
    std::vector<double> bad{0.6};
    CHECK_FALSE(check_feasible(lp, bad, 1e-9));
}

TEST_CASE("solve_lp is deterministic and optimal points are feasible") {
    std::mt19937_64 rng(123);
    for (int t = 0; t < 50; ++t) {
        std::uniform_int_distribution<int> nv(2, 5), nc(2, 5);
        std::uniform_real_distribution<double> coef(-1.0, 1.0), pos(0.2, 2.0);
        LinearProgram lp;
        lp.num_vars = std::size_t(nv(rng));
        lp.objective.resize(lp.num_vars);
        for (auto& c : lp.objective) c = coef(rng);
        const int m = nc(rng);
        for (int i = 0; i < m; ++i) {
            std::vector<double> row(lp.num_vars);
            for (auto& c : row) c = coef(rng);
            lp.add(std::move(row), Sense::le, pos(rng));
        }
        {
            std::vector<double> cap(lp.num_vars, 1.0);
            lp.add(std::move(cap), Sense::le, pos(rng) + 1.0);  // keep it bounded
        }
        auto s1 = solve_lp(lp);
        auto s2 = solve_lp(lp);
        REQUIRE(s1.status == s2.status);
        if (s1.status == SolveStatus::optimal) {
            CHECK(s1.value == s2.value);
            CHECK(s1.point == s2.point);
            CHECK(check_feasible(lp, s1.point, 1e-9));
            for (double v : s1.point) CHECK(v >= -1e-12);
        }
    }
}

TEST_CASE("solve_lp matches exhaustive vertex enumeration on random LPs") {
    std::mt19937_64 rng(2024);
    int solved = 0;
    while (solved < 100) {
        std::uniform_int_distribution<int> nv(3, 7), nc(2, 4);
        std::uniform_real_distribution<double> coef(-1.0, 1.0), pos(0.2, 2.0);
        LinearProgram lp;
        lp.num_vars = std::size_t(nv(rng));
        lp.objective.resize(lp.num_vars);
        for (auto& c : lp.objective) c = coef(rng);
        const int m = nc(rng);
        for (int i = 0; i < m; ++i) {
            std::vector<double> row(lp.num_vars);
            for (auto& c : row) c = coef(rng);
            lp.add(std::move(row), Sense::le, pos(rng));
        }
        std::vector<double> cap(lp.num_vars, 1.0);
        lp.add(std::move(cap), Sense::le, pos(rng) + 0.5);
        auto sol = solve_lp(lp);
        REQUIRE(sol.status == SolveStatus::optimal);  // 0 is feasible, region bounded
        auto oracle_best = oracle::vertex_enum_max(lp);
        REQUIRE(oracle_best.has_value());
        CHECK(std::abs(sol.value - *oracle_best) < 1e-8);
        ++solved;
    }
}

TEST_CASE("positive objective scaling preserves the argmax vertex") {
    LinearProgram lp = single_link_lp(0.3, 0.4);
    auto base = solve_lp(lp);
    REQUIRE(base.status == SolveStatus::optimal);
    for (double s : {2.0, 10.0, 0.25}) {
        LinearProgram scaled = lp;
        for (auto& c : scaled.objective) c *= s;
        auto sol = solve_lp(scaled);
        REQUIRE(sol.status == SolveStatus::optimal);
        CHECK(sol.value == doctest::Approx(s * base.value).epsilon(1e-12));
        for (std::size_t j = 0; j < lp.num_vars; ++j)
            CHECK(sol.point[j] == doctest::Approx(base.point[j]).epsilon(1e-12));
    }
}

TEST_CASE("trace_region on a box region") {
    RegionModel model;
    model.var_names = {"r1", "r2"};
    model.build_lp = [](double w1, double w2) {
        LinearProgram lp;
        lp.num_vars = 2;
        lp.objective = {w1, w2};
        lp.add({1.0, 0.0}, Sense::le, 0.4);
        lp.add({0.0, 1.0}, Sense::le, 0.7);
        return lp;
    };
    auto pts = trace_region(model, 16);
    REQUIRE(!pts.empty());
    // interior angles find the corner; extremes may slide along the edges
    bool has_corner = false;
    for (const auto& p : pts)
        if (std::abs(p.r1 - 0.4) < 1e-9 && std::abs(p.r2 - 0.7) < 1e-9) has_corner = true;
    CHECK(has_corner);
    for (const auto& p : pts) {
        CHECK(p.r1 <= 0.4 + 1e-9);
        CHECK(p.r2 <= 0.7 + 1e-9);
    }
    for (std::size_t i = 1; i < pts.size(); ++i) CHECK(pts[i - 1].r1 >= pts[i].r1 - 1e-12);
}

TEST_CASE("trace_region support function property") {
    RegionModel model;
    model.var_names = {"r1", "r2"};
    model.build_lp = [](double w1, double w2) {
        LinearProgram lp;
        lp.num_vars = 2;
        lp.objective = {w1, w2};
        lp.add({1.0, 2.0}, Sense::le, 1.0);
        lp.add({2.0, 1.0}, Sense::le, 1.0);
        return lp;
    };
    const std::size_t angles = 12;
    auto pts = trace_region(model, angles);
    const double pi_2 = std::acos(0.0);
    for (std::size_t k = 0; k < angles; ++k) {
        const double w1 = std::cos(pi_2 * double(k) / double(angles - 1));
        const double w2 = std::sin(pi_2 * double(k) / double(angles - 1));
        auto sol = solve_lp(model.build_lp(w1, w2));
        REQUIRE(sol.status == SolveStatus::optimal);
        for (const auto& p : pts) CHECK(sol.value >= w1 * p.r1 + w2 * p.r2 - 1e-9);
    }
}
