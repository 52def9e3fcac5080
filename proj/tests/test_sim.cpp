#include <cmath>
#include <stdexcept>

#include "bench_nets.hpp"
#include "doctest.h"
#include "seccap/capacity.hpp"
#include "seccap/sim.hpp"
#include "seccap/transcript.hpp"

using namespace seccap;

namespace {

RegionPoint max_sum_vertex(const NetworkModel& net) {
    auto sol = solve_lp(capacity_lp(net, 1.0, 1.0));
    REQUIRE(sol.status == SolveStatus::optimal);
    RegionPoint p;
    p.r1 = sol.point[0];
    p.r2 = sol.point[1];
    const auto names = variable_layout(net.topology);
    for (std::size_t i = 2; i < names.size(); ++i) p.aux.emplace_back(names[i], sol.point[i]);
    return p;
}

SimConfig base_cfg(const NetworkModel& net, std::uint64_t n, double margin, std::uint64_t seed,
                   SimMode mode = SimMode::counting) {
    SimConfig cfg;
    cfg.net = net;
    cfg.operating_point = max_sum_vertex(net);
    cfg.horizon = n;
    cfg.margin = margin;
    cfg.seed = seed;
    cfg.mode = mode;
    return cfg;
}

}  // namespace

TEST_CASE("run_arq expectations") {
    Rng rng(42);
    CHECK_THROWS_AS(run_arq(10, {1.0, 0.5}, rng), std::invalid_argument);
    auto zero = run_arq(0, {0.5, 0.5}, rng);
    CHECK(zero.slots_used == 0);

    auto sure = run_arq(5000, {0.0, 0.3}, rng);
    CHECK(sure.slots_used == 5000);  // one shot per packet when delta = 0
    // catch fraction -> 1 - deltaE
    CHECK(std::abs(double(sure.eav_catches) / 5000.0 - 0.7) < 3.0 * std::sqrt(0.7 * 0.3 / 5000.0));

    auto blind = run_arq(2000, {0.5, 1.0}, rng);
    CHECK(blind.eav_catches == 0);

    const std::uint64_t big = 100000;
    auto r = run_arq(big, {0.5, 0.5}, rng);
    const double frac = double(r.eav_catches) / double(big);
    const double expect = (1.0 - 0.5) / (1.0 - 0.25);  // 2/3
    CHECK(std::abs(frac - expect) < 3.0 * std::sqrt(expect * (1 - expect) / double(big)));
    const double slots_per = double(r.slots_used) / double(big);
    const double se_slots = std::sqrt((0.5 / 0.25) / double(big));  // geometric variance d/(1-d)^2
    CHECK(std::abs(slots_per - 2.0) < 3.0 * se_slots);
}

TEST_CASE("run_key_sharing_broadcast expectations") {
    Rng rng(7);
    auto zero = run_key_sharing_broadcast(0, {0.5, 0.5}, rng);
    CHECK(zero.slots_used == 0);
    CHECK(zero.pool.secret_count == 0);
    CHECK_THROWS_AS(run_key_sharing_broadcast(10, {0.5, 0.0}, rng), std::invalid_argument);
    CHECK_THROWS_AS(run_key_sharing_broadcast(10, {1.0, 0.5}, rng), std::invalid_argument);

    // deltaE = 1: every received packet is secret, slots ~ k/(1-d)
    auto blind = run_key_sharing_broadcast(3000, {0.25, 1.0}, rng);
    CHECK(blind.pool.secret_count == 3000);
    CHECK(blind.pool.backing_count == 3000);
    CHECK(std::abs(double(blind.slots_used) - 4000.0) < 0.05 * 4000.0);

    // (d, dE) = (0, 0.5): expected slots 2k
    double slots = 0;
    for (std::uint64_t s = 0; s < 5; ++s) {
        Rng r2(100 + s);
        slots += double(run_key_sharing_broadcast(1000, {0.0, 0.5}, r2).slots_used);
    }
    CHECK(std::abs(slots / 5.0 - 2000.0) < 0.05 * 2000.0);
}

TEST_CASE("run_relay_expansion bound and tallies") {
    Rng rng(11);
    auto zero = run_relay_expansion(100, 0, {0.0, 0.0}, rng);
    CHECK(zero.slots_used == 0);
    // expansion factor 1 at d = dE = 0: at most backing (+rounding slack)
    CHECK_THROWS_AS(run_relay_expansion(100, 110, {0.0, 0.0}, rng), std::invalid_argument);
    auto ok = run_relay_expansion(100, 100, {0.0, 0.0}, rng);
    CHECK(ok.pool.backing_count == 100);  // everything received, everything seen
    CHECK(ok.pool.secret_count == 0);     // dE = 0: eavesdropper sees all

    const std::uint64_t send = 100000;
    auto r = run_relay_expansion(1u << 30, send, {0.25, 0.05}, rng);
    const double p = 0.75 * 0.05;
    CHECK(std::abs(double(r.pool.secret_count) - p * send) <
          3.0 * std::sqrt(p * (1 - p) * double(send)));
}

TEST_CASE("run_ry_source_phase expectations") {
    Rng rng(13);
    CHECK_THROWS_AS(run_ry_source_phase(10, 11, 0, {0.3, 0.15}, rng), std::invalid_argument);

    // budget used only by ARQ: secret fraction = (1-d) dE / (1-d dE)
    const std::uint64_t e = 20000;
    auto arq_only = run_ry_source_phase(e, e, 0, {0.3, 0.15}, rng);
    const double frac = 0.7 * 0.15 / (1.0 - 0.3 * 0.15);
    CHECK(arq_only.pool.backing_count == e);
    CHECK(std::abs(double(arq_only.pool.secret_count) - frac * e) <
          3.0 * std::sqrt(frac * (1 - frac) * double(e)));

    // e = 0 reduces to a pure expansion
    auto pure = run_ry_source_phase(1u << 20, 0, 3000, {0.3, 0.15}, rng);
    CHECK(std::abs(double(pure.pool.secret_count) - 3000.0) < 0.05 * 3000.0);
}

TEST_CASE("run_message_phase consumption and flags") {
    Rng rng(17);
    KeyPool pool;
    pool.secret_count = 100000;
    auto zero = run_message_phase(0, pool, {0.25, 0.05}, rng);
    CHECK(zero.slots_used == 0);

    auto blind = run_message_phase(5000, pool, {0.25, 1.0}, rng);
    CHECK(blind.catches == 0);
    CHECK(blind.sent == 5000);

    const std::uint64_t msgs = 50000;
    auto r = run_message_phase(msgs, pool, {0.25, 0.05}, rng);
    const double pc = arq_catch_prob({0.25, 0.05});
    CHECK(r.sent == msgs);
    CHECK(std::abs(double(r.catches) - pc * msgs) < 3.0 * std::sqrt(pc * (1 - pc) * msgs));
    CHECK_FALSE(r.exhausted);

    KeyPool tiny;
    tiny.secret_count = 10;
    auto stopped = run_message_phase(1000, tiny, {0.25, 0.05}, rng, /*safety=*/8);
    CHECK(stopped.sent < 10);
    CHECK_FALSE(stopped.exhausted);
    auto overrun = run_message_phase(1000, tiny, {0.25, 0.05}, rng, /*safety=*/0);
    CHECK(overrun.sent == 1000);
    CHECK(overrun.exhausted);
}

TEST_CASE("run_scheme: zero point and zero horizon") {
    SimConfig cfg = base_cfg(bench::y_net(), 5000, 0.95, 1);
    cfg.operating_point = RegionPoint{};
    const auto names = variable_layout(cfg.net.topology);
    for (std::size_t i = 2; i < names.size(); ++i) cfg.operating_point.aux.emplace_back(names[i], 0.0);
    auto rep = run_scheme(cfg);
    CHECK(rep.delivered1 == 0);
    CHECK(rep.delivered2 == 0);
    for (const auto& l : rep.links) CHECK(l.msg_slots == 0);

    SimConfig empty = base_cfg(bench::y_net(), 0, 0.95, 1);
    auto rep0 = run_scheme(empty);
    CHECK(rep0.truncated);
}

TEST_CASE("run_scheme rejects bad configs") {
    SimConfig cfg = base_cfg(bench::y_net(), 1000, 0.95, 1);
    cfg.margin = 0.0;
    CHECK_THROWS_AS(run_scheme(cfg), std::invalid_argument);
    cfg.margin = 0.95;
    cfg.operating_point.r1 = 5.0;  // far outside the region
    CHECK_THROWS_AS(run_scheme(cfg), std::invalid_argument);
}

TEST_CASE("run_scheme converges to the scaled capacity on the benchmarks") {
    for (const auto& net : {bench::y_net(), bench::ry_net(), bench::x_net()}) {
        double sum = 0;
        const double lp_sum = max_sum_vertex(net).r1 + max_sum_vertex(net).r2;
        const int seeds = 3;
        for (int s = 0; s < seeds; ++s) {
            SimConfig cfg = base_cfg(net, 100000, 0.95, 100 + s);
            auto rep = run_scheme(cfg);
            CHECK_FALSE(rep.exhausted);
            sum += rep.sum_rate();
            for (const auto& l : rep.links) {
                if (!l.exhausted) CHECK(l.key_tally >= l.catches);  // key balance
            }
        }
        const double target = 0.95 * lp_sum;
        CHECK(std::abs(sum / seeds - target) / target < 0.05);
    }
}

TEST_CASE("counting and field modes share slot and tally statistics") {
    for (const auto& net : {bench::y_net(), bench::ry_net(), bench::x_net()}) {
        SimConfig counting = base_cfg(net, 2000, 0.9, 77, SimMode::counting);
        SimConfig field = base_cfg(net, 2000, 0.9, 77, SimMode::field);
        auto a = run_scheme(counting);
        Transcript tr;
        auto b = run_scheme(field, &tr);
        CHECK(a.delivered1 == b.delivered1);
        CHECK(a.delivered2 == b.delivered2);
        CHECK(a.slots_used_max == b.slots_used_max);
        REQUIRE(a.links.size() == b.links.size());
        for (std::size_t i = 0; i < a.links.size(); ++i) {
            CHECK(a.links[i].key_slots == b.links[i].key_slots);
            CHECK(a.links[i].msg_slots == b.links[i].msg_slots);
            CHECK(a.links[i].key_tally == b.links[i].key_tally);
            CHECK(a.links[i].backing == b.links[i].backing);
            CHECK(a.links[i].messages_sent == b.links[i].messages_sent);
            CHECK(a.links[i].catches == b.links[i].catches);
        }
    }
}

TEST_CASE("X relay randomness accounting matches the leaf pools") {
    SimConfig cfg = base_cfg(bench::x_net(), 100000, 0.95, 5);
    auto rep = run_scheme(cfg);
    // M1's available randomness is what the leaf key phases delivered
    const double backing = double(rep.links[0].backing + rep.links[1].backing);
    double expect = 0;
    for (int j = 0; j < 2; ++j)
        expect += double(rep.links[j].key_target) / cfg.net.channels[j].delta_e;
    CHECK(std::abs(backing - expect) / expect < 0.05);
}

TEST_CASE("field mode end-to-end: secure and decodable on the benchmarks") {
    for (const auto& net : {bench::y_net(), bench::ry_net(), bench::x_net()}) {
        SimConfig cfg = base_cfg(net, 1500, 0.9, 2025, SimMode::field);
        Transcript tr;
        auto rep = run_scheme(cfg, &tr);
        CHECK_FALSE(rep.exhausted);
        for (std::size_t link = 0; link < num_links(net.topology); ++link)
            CHECK(check_secrecy(tr, int(link)).secure);
        for (std::size_t d = 0; d < tr.num_destinations(); ++d)
            CHECK(check_decodability(tr, d).decodable);
    }
}

TEST_CASE("unsafe raw keys leak against a strong eavesdropper") {
    bool leaked = false;
    for (std::uint64_t seed = 0; seed < 10 && !leaked; ++seed) {
        SimConfig cfg = base_cfg(bench::y_net(), 1500, 0.9, seed, SimMode::field);
        cfg.unsafe_raw_keys = true;
        Transcript tr;
        run_scheme(cfg, &tr);
        for (std::size_t link = 0; link < 3; ++link)
            if (!check_secrecy(tr, int(link)).secure) leaked = true;
    }
    CHECK(leaked);
}

TEST_CASE("merge_reports aggregates trials") {
    SimConfig cfg = base_cfg(bench::y_net(), 20000, 0.95, 9);
    auto r1 = run_scheme(cfg);
    cfg.seed = 10;
    auto r2 = run_scheme(cfg);
    std::vector<SimReport> rs{r1, r2};
    auto merged = merge_reports(rs);
    CHECK(merged.trials == 2);
    CHECK(merged.delivered1 == r1.delivered1 + r2.delivered1);
    CHECK(merged.rate1 == doctest::Approx(0.5 * (r1.rate1 + r2.rate1)));
}
