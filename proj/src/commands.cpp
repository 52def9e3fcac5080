#include "seccap/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <stdexcept>

#include "json.hpp"
#include "seccap/capacity.hpp"
#include "seccap/region_io.hpp"

namespace seccap {

using json = nlohmann::ordered_json;

namespace {

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

[[noreturn]] void bad_key(const std::string& key, const std::string& why) {
    throw std::invalid_argument("config key \"" + key + "\": " + why);
}

RegionPoint vertex_point(const NetworkModel& net, double w1, double w2) {
    LpSolution sol = solve_lp(capacity_lp(net, w1, w2));
    if (sol.status != SolveStatus::optimal)
        throw std::runtime_error("capacity LP did not solve to optimality");
    RegionPoint p;
    p.r1 = sol.point[0];
    p.r2 = sol.point[1];
    const auto names = variable_layout(net.topology);
    for (std::size_t i = 2; i < names.size(); ++i) p.aux.emplace_back(names[i], sol.point[i]);
    return p;
}

RegionPoint lifted_point(const NetworkModel& net, double r1, double r2) {
    auto vec = lift_rate_point(net, r1, r2);
    RegionPoint p;
    p.r1 = vec[0];
    p.r2 = vec[1];
    const auto names = variable_layout(net.topology);
    for (std::size_t i = 2; i < names.size(); ++i) p.aux.emplace_back(names[i], vec[i]);
    return p;
}

json link_json(const LinkReport& l) {
    json j;
    j["link"] = l.link;
    j["key_slots"] = l.key_slots;
    j["msg_slots"] = l.msg_slots;
    j["key_target"] = l.key_target;
    j["key_tally"] = l.key_tally;
    j["backing"] = l.backing;
    j["messages_assigned"] = l.messages_assigned;
    j["messages_sent"] = l.messages_sent;
    j["catches"] = l.catches;
    j["bound_stopped"] = l.bound_stopped;
    j["slot_capped"] = l.slot_capped;
    j["exhausted"] = l.exhausted;
    return j;
}

json report_json(const SimReport& r, const RegionPoint& point) {
    json j;
    j["horizon"] = r.horizon;
    j["seed"] = r.seed;
    j["margin"] = r.margin;
    j["mode"] = r.mode == SimMode::field ? "field" : "counting";
    j["trials"] = r.trials;
    json p;
    p["r1"] = point.r1;
    p["r2"] = point.r2;
    for (const auto& [name, v] : point.aux) p[name] = v;
    j["operating_point"] = p;
    j["delivered"] = {{"n1", r.delivered1}, {"n2", r.delivered2}};
    j["rates"] = {{"r1", r.rate1}, {"r2", r.rate2}, {"sum", r.rate1 + r.rate2}};
    j["slots_used_max"] = r.slots_used_max;
    j["flags"] = {{"truncated", r.truncated}, {"exhausted", r.exhausted}};
    json links = json::array();
    for (const auto& l : r.links) links.push_back(link_json(l));
    j["links"] = links;
    return j;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");

    RunConfig cfg;
    bool have_topology = false, have_links = false;
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        const json& v = it.value();
        if (key == "topology") {
            if (!v.is_string()) bad_key(key, "expected \"y\", \"ry\" or \"x\"");
            auto t = topology_from_name(v.get<std::string>());
            if (!t) bad_key(key, "unknown topology \"" + v.get<std::string>() + "\"");
            cfg.net.topology = *t;
            have_topology = true;
        } else if (key == "links") {
            if (!v.is_array()) bad_key(key, "expected an array of {delta, delta_e}");
            for (const auto& link : v) {
                if (!link.is_object() || !link.contains("delta") || !link.contains("delta_e"))
                    bad_key(key, "each link needs numeric delta and delta_e");
                for (auto lit = link.begin(); lit != link.end(); ++lit)
                    if (lit.key() != "delta" && lit.key() != "delta_e")
                        bad_key("links." + lit.key(), "unknown key");
                cfg.net.channels.push_back(
                    {link["delta"].get<double>(), link["delta_e"].get<double>()});
            }
            have_links = true;
        } else if (key == "d0") {
            if (!v.is_number()) bad_key(key, "expected a number");
            cfg.net.d0 = v.get<double>();
        } else if (key == "angles") {
            if (!v.is_number_unsigned() || v.get<std::uint64_t>() < 2)
                bad_key(key, "expected an integer >= 2");
            cfg.angles = v.get<std::size_t>();
        } else if (key == "weights") {
            if (!v.is_array() || v.size() != 2) bad_key(key, "expected [w1, w2]");
            cfg.w1 = v[0].get<double>();
            cfg.w2 = v[1].get<double>();
            if (cfg.w1 < 0 || cfg.w2 < 0 || (cfg.w1 == 0 && cfg.w2 == 0))
                bad_key(key, "weights must be nonnegative and not both zero");
        } else if (key == "n") {
            if (!v.is_number_unsigned()) bad_key(key, "expected a nonnegative integer");
            cfg.n = v.get<std::uint64_t>();
        } else if (key == "seed") {
            if (!v.is_number_unsigned()) bad_key(key, "expected a nonnegative integer");
            cfg.seed = v.get<std::uint64_t>();
        } else if (key == "margin") {
            if (!v.is_number()) bad_key(key, "expected a number in (0, 1]");
            cfg.margin = v.get<double>();
            if (!(cfg.margin > 0.0 && cfg.margin <= 1.0)) bad_key(key, "must lie in (0, 1]");
        } else if (key == "mode") {
            if (!v.is_string()) bad_key(key, "expected \"counting\" or \"field\"");
            const std::string m = v.get<std::string>();
            if (m == "counting")
                cfg.mode = SimMode::counting;
            else if (m == "field")
                cfg.mode = SimMode::field;
            else
                bad_key(key, "unknown mode \"" + m + "\"");
        } else if (key == "out") {
            if (!v.is_string()) bad_key(key, "expected a path string");
            cfg.out = v.get<std::string>();
        } else {
            bad_key(key, "unknown key");
        }
    }
    if (!have_topology) throw std::invalid_argument("config key \"topology\": missing");
    if (!have_links) throw std::invalid_argument("config key \"links\": missing");
    try {
        validate_network(cfg.net);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

CommandResult cmd_region(const RunConfig& cfg) {
    CommandResult res;
    auto model = capacity_region_model(cfg.net);
    std::vector<RegionPoint> pts;
    try {
        pts = trace_region(model, cfg.angles);
    } catch (const std::runtime_error& e) {
        res.code = exit_lp_failure;
        res.summary = std::string("region trace failed for topology ") +
                      topology_name(cfg.net.topology) + ": " + e.what() + "\n";
        return res;
    }
    LinearProgram lp = capacity_lp(cfg.net, 1.0, 1.0);
    for (const auto& p : pts) {
        std::vector<double> full{p.r1, p.r2};
        for (const auto& [name, v] : p.aux) full.push_back(v);
        if (!check_feasible(lp, full, 1e-7)) {
            res.code = exit_lp_failure;
            res.summary = "internal error: traced point violates its own LP\n";
            return res;
        }
    }
    res.output = region_csv(pts);
    if (!cfg.svg.empty()) {
        SvgSeries s{"capacity", "#1f6fb2", {}};
        for (const auto& p : pts) s.points.emplace_back(p.r1, p.r2);
        res.svg = region_svg({s}, "secret-message rate region (" +
                                      topology_name(cfg.net.topology) + "-network)");
    }
    res.summary = "traced " + std::to_string(pts.size()) + " frontier points\n";
    return res;
}

CommandResult cmd_compare(const RunConfig& cfg) {
    CommandResult res;
    std::vector<CompareRow> rows;
    double c1 = 0, c2 = 0;
    try {
        c1 = single_session_capacity(cfg.net, 1);
        c2 = single_session_capacity(cfg.net, 2);
        const double pi_2 = std::acos(0.0);
        for (std::size_t k = 0; k < cfg.angles; ++k) {
            const double th = pi_2 * double(k) / double(cfg.angles - 1);
            CompareRow row;
            row.w1 = std::cos(th);
            row.w2 = std::sin(th);
            auto cap = solve_lp(capacity_lp(cfg.net, row.w1, row.w2));
            if (cap.status != SolveStatus::optimal)
                throw std::runtime_error("capacity LP not optimal");
            row.capacity = cap.value;
            row.link_sharing = link_sharing_value(cfg.net, row.w1, row.w2);
            row.path_sharing = std::max(row.w1 * c1, row.w2 * c2);
            rows.push_back(row);
        }
    } catch (const std::runtime_error& e) {
        res.code = exit_lp_failure;
        res.summary = std::string("comparison failed: ") + e.what() + "\n";
        return res;
    }
    res.output = compare_csv(rows);
    double min_l = HUGE_VAL, max_l = 0;
    for (const auto& r : rows) {
        const double rl = r.link_sharing > 0 ? r.capacity / r.link_sharing : 1.0;
        min_l = std::min(min_l, rl);
        max_l = std::max(max_l, rl);
    }
    res.summary = "capacity vs link sharing ratio over " + std::to_string(rows.size()) +
                  " angles: min " + fmt("%.4f", min_l) + ", max " + fmt("%.4f", max_l) + "\n";
    return res;
}

namespace {

CommandResult simulate_common(const RunConfig& cfg, SimMode mode, Transcript* tr,
                              RegionPoint* point_out, SimReport* report_out) {
    CommandResult res;
    RegionPoint point;
    try {
        point = cfg.point ? lifted_point(cfg.net, cfg.point->first, cfg.point->second)
                          : vertex_point(cfg.net, cfg.w1, cfg.w2);
    } catch (const std::runtime_error& e) {
        res.code = exit_lp_failure;
        res.summary = std::string("operating point: ") + e.what() + "\n";
        return res;
    }
    *point_out = point;

    SimConfig sim;
    sim.net = cfg.net;
    sim.operating_point = point;
    sim.horizon = cfg.n;
    sim.margin = cfg.margin;
    sim.mode = mode;
    sim.unsafe_raw_keys = cfg.unsafe_raw_keys;

    if (tr || cfg.trials <= 1) {
        sim.seed = cfg.seed;
        *report_out = run_scheme(sim, tr);
    } else {
        std::vector<std::future<SimReport>> futs;
        for (std::uint32_t t = 0; t < cfg.trials; ++t) {
            SimConfig c = sim;
            c.seed = cfg.seed + t;
            futs.push_back(std::async(std::launch::async, [c] { return run_scheme(c); }));
        }
        std::vector<SimReport> reports;
        for (auto& f : futs) reports.push_back(f.get());
        *report_out = merge_reports(reports);
    }
    return res;
}

}  // namespace

CommandResult cmd_simulate(const RunConfig& cfg) {
    CommandResult res;
    RegionPoint point;
    SimReport rep;
    res = simulate_common(cfg, cfg.mode.value_or(SimMode::counting), nullptr, &point, &rep);
    if (res.code != exit_ok) return res;

    res.output = report_json(rep, point).dump(2) + "\n";
    const double lp_sum = point.r1 + point.r2;
    const double target = cfg.margin * lp_sum;
    const double got = rep.rate1 + rep.rate2;
    res.summary = "delivered " + std::to_string(rep.delivered1) + " + " +
                  std::to_string(rep.delivered2) + " packets over " + std::to_string(rep.horizon) +
                  " slots/link (" + std::to_string(rep.trials) + " trial(s))\n" +
                  "empirical sum rate " + fmt("%.6f", got) + " vs scaled capacity " +
                  fmt("%.6f", target) +
                  (target > 0 ? " (relative gap " + fmt("%.3f%%", 100.0 * (target - got) / target) + ")"
                              : "") +
                  "\n";
    if (rep.truncated) res.summary += "flag: truncated (slot budget exhausted)\n";
    if (rep.exhausted) res.summary += "flag: key pool exhausted\n";
    if (rep.truncated || rep.exhausted) res.code = exit_sim_flag;
    return res;
}

CommandResult cmd_verify(const RunConfig& cfg) {
    CommandResult res;
    if (cfg.mode && *cfg.mode != SimMode::field) {
        res.code = exit_bad_input;
        res.summary = "verify requires mode=field\n";
        return res;
    }
    if (cfg.n > 10000) {
        res.code = exit_bad_input;
        res.summary = "verify supports n <= 10000 (rank cost grows with the transcript)\n";
        return res;
    }
    Transcript tr;
    RegionPoint point;
    SimReport rep;
    res = simulate_common(cfg, SimMode::field, &tr, &point, &rep);
    if (res.code != exit_ok) return res;

    if (!cfg.transcript_out.empty()) {
        std::ofstream os(cfg.transcript_out, std::ios::binary);
        if (!os) {
            res.code = exit_bad_input;
            res.summary = "cannot write transcript to " + cfg.transcript_out + "\n";
            return res;
        }
        write_transcript(os, tr);
    }

    json j = report_json(rep, point);
    bool all_ok = true;
    json eavs = json::array();
    res.summary += "eavesdropper hypotheses:\n";
    for (std::size_t link = 0; link < num_links(cfg.net.topology); ++link) {
        auto v = check_secrecy(tr, int(link));
        json e;
        e["link"] = link + 1;
        e["secure"] = v.secure;
        e["rows"] = v.rows;
        e["rank_full"] = v.rank_full;
        e["rank_randomness"] = v.rank_rand;
        eavs.push_back(e);
        all_ok = all_ok && v.secure;
        res.summary += "  link " + std::to_string(link + 1) + ": " +
                       (v.secure ? "secure" : "INSECURE") + " (rows " + std::to_string(v.rows) +
                       ", rank " + std::to_string(v.rank_full) + ", randomness rank " +
                       std::to_string(v.rank_rand) + ")\n";
    }
    j["eavesdroppers"] = eavs;
    json dests = json::array();
    res.summary += "destinations:\n";
    for (std::size_t d = 0; d < tr.num_destinations(); ++d) {
        auto v = check_decodability(tr, d);
        json e;
        e["destination"] = d + 1;
        e["decodable"] = v.decodable;
        e["owed"] = v.owed;
        e["rank_full"] = v.rank_full;
        e["rank_msg_zeroed"] = v.rank_msg_zeroed;
        dests.push_back(e);
        all_ok = all_ok && v.decodable;
        res.summary += "  destination " + std::to_string(d + 1) + ": " +
                       (v.decodable ? "decodable" : "NOT DECODABLE") + " (owed " +
                       std::to_string(v.owed) + ")\n";
    }
    j["destinations"] = dests;
    res.output = j.dump(2) + "\n";
    if (!all_ok) res.code = exit_insecure;
    return res;
}

}  // namespace seccap
