#include "seccap/capacity.hpp"

#include <cmath>
#include <stdexcept>

namespace seccap {

namespace {

// Which sources may contribute randomness. The baselines of the comparison
// strategies exclude the idle source entirely, so its term never enters the
// relay budget (important when its delta_e is 0 and the cleared row would
// otherwise lose the term's information).
struct SourceUse {
    bool source1 = true;
    bool source2 = true;
};

void require_topology(const NetworkModel& net, Topology t, const char* who) {
    validate_network(net);
    if (net.topology != t)
        throw std::invalid_argument(std::string(who) + ": wrong topology " +
                                    topology_name(net.topology));
}

std::vector<double> zeros(std::size_t n) { return std::vector<double>(n, 0.0); }

LinearProgram build_y_internal(const NetworkModel& net, double w1, double w2, SourceUse use) {
    const auto& c = net.channels;
    LinearProgram lp;
    lp.num_vars = 5;  // r1 r2 k1 k2 k3
    lp.objective = {w1, w2, 0, 0, 0};

    for (int j = 0; j < 2; ++j) {
        const double d = c[j].delta, de = c[j].delta_e;
        // key sufficiency: R_j (1 - dE) <= k_j (1 - d dE)
        auto key = zeros(5);
        key[j] = 1.0 - de;
        key[2 + j] = -(1.0 - d * de);
        lp.add(std::move(key), Sense::le, 0.0);
        // time: R_j dE + k_j <= (1 - d) dE
        auto time = zeros(5);
        time[j] = de;
        time[2 + j] = 1.0;
        lp.add(std::move(time), Sense::le, (1.0 - d) * de);
    }
    {
        const double d = c[2].delta, de = c[2].delta_e;
        auto key = zeros(5);
        key[0] = key[1] = 1.0 - de;
        key[4] = -(1.0 - d * de);
        lp.add(std::move(key), Sense::le, 0.0);
        auto time = zeros(5);
        time[0] = time[1] = de;
        time[4] = 1.0;
        lp.add(std::move(time), Sense::le, (1.0 - d) * de);
    }
    {
        // relay randomness budget:
        // k3 <= (sum_j k_j / d_jE) (1-d3) d3E / (1-d3 d3E), cleared by prod d_jE
        const double d3 = c[2].delta, d3e = c[2].delta_e;
        const double gain = (1.0 - d3) * d3e;
        auto relay = zeros(5);
        double factor = 1.0;
        if (use.source1) factor *= c[0].delta_e;
        if (use.source2) factor *= c[1].delta_e;
        relay[4] = factor * (1.0 - d3 * d3e);
        if (use.source1) relay[2] = -(use.source2 ? c[1].delta_e : 1.0) * gain;
        if (use.source2) relay[3] = -(use.source1 ? c[0].delta_e : 1.0) * gain;
        lp.add(std::move(relay), Sense::le, 0.0);
    }
    return lp;
}

LinearProgram build_ry_internal(const NetworkModel& net, double w1, double w2) {
    const auto& c = net.channels;
    const double d0 = *net.d0;
    LinearProgram lp;
    lp.num_vars = 6;  // r1 r2 k1 k2 k3 e
    lp.objective = {w1, w2, 0, 0, 0, 0};
    const double d3 = c[2].delta, d3e = c[2].delta_e;
    const double gain3 = (1.0 - d3) * d3e;

    {
        // shared-link key: (R1+R2)(1-d3E) <= k3 (1-d3 d3E) + e (1-d3) d3E
        auto key = zeros(6);
        key[0] = key[1] = 1.0 - d3e;
        key[4] = -(1.0 - d3 * d3e);
        key[5] = -gain3;
        lp.add(std::move(key), Sense::le, 0.0);
    }
    for (int j = 0; j < 2; ++j) {
        const double d = c[j].delta, de = c[j].delta_e;
        auto key = zeros(6);
        key[j] = 1.0 - de;
        key[2 + j] = -(1.0 - d * de);
        lp.add(std::move(key), Sense::le, 0.0);
    }
    {
        // time on the shared link carries the extra ARQ randomness e
        auto time = zeros(6);
        time[0] = time[1] = d3e;
        time[4] = 1.0;
        time[5] = d3e;
        lp.add(std::move(time), Sense::le, gain3);
    }
    for (int j = 0; j < 2; ++j) {
        const double d = c[j].delta, de = c[j].delta_e;
        auto time = zeros(6);
        time[j] = de;
        time[2 + j] = 1.0;
        lp.add(std::move(time), Sense::le, (1.0 - d) * de);
    }
    {
        // source randomness budget: k3 (1-d3 d3E) + e (1-d3) d3E <= D0 (1-d3) d3E
        auto budget = zeros(6);
        budget[4] = 1.0 - d3 * d3e;
        budget[5] = gain3;
        lp.add(std::move(budget), Sense::le, d0 * gain3);
    }
    for (int j = 0; j < 2; ++j) {
        // relay key budget: k_j d3E (1-d_j d_jE) <= (e d3E + k3)(1-d_j) d_jE
        const double d = c[j].delta, de = c[j].delta_e;
        const double gain = (1.0 - d) * de;
        auto relay = zeros(6);
        relay[2 + j] = d3e * (1.0 - d * de);
        relay[4] = -gain;
        relay[5] = -d3e * gain;
        lp.add(std::move(relay), Sense::le, 0.0);
    }
    return lp;
}

LinearProgram build_x_internal(const NetworkModel& net, double w1, double w2, SourceUse use) {
    const auto& c = net.channels;
    LinearProgram lp;
    lp.num_vars = 8;  // r1 r2 k1 k2 k3 k4 k5 e
    lp.objective = {w1, w2, 0, 0, 0, 0, 0, 0};
    const double d3 = c[2].delta, d3e = c[2].delta_e;
    const double gain3 = (1.0 - d3) * d3e;

    for (int j = 0; j < 2; ++j) {
        const double d = c[j].delta, de = c[j].delta_e;
        auto key = zeros(8);
        key[j] = 1.0 - de;
        key[2 + j] = -(1.0 - d * de);
        lp.add(std::move(key), Sense::le, 0.0);
        auto time = zeros(8);
        time[j] = de;
        time[2 + j] = 1.0;
        lp.add(std::move(time), Sense::le, (1.0 - d) * de);
    }
    {
        auto key = zeros(8);
        key[0] = key[1] = 1.0 - d3e;
        key[4] = -(1.0 - d3 * d3e);
        key[7] = -gain3;
        lp.add(std::move(key), Sense::le, 0.0);
        auto time = zeros(8);
        time[0] = time[1] = d3e;
        time[4] = 1.0;
        time[7] = d3e;
        lp.add(std::move(time), Sense::le, gain3);
    }
    for (int j = 3; j < 5; ++j) {
        const double d = c[j].delta, de = c[j].delta_e;
        auto key = zeros(8);
        key[j - 3] = 1.0 - de;
        key[2 + j] = -(1.0 - d * de);
        lp.add(std::move(key), Sense::le, 0.0);
        auto time = zeros(8);
        time[j - 3] = de;
        time[2 + j] = 1.0;
        lp.add(std::move(time), Sense::le, (1.0 - d) * de);
    }
    {
        // M1 budget: k3 <= (k1/d1E + k2/d2E - e)(1-d3) d3E / (1-d3 d3E), cleared
        auto relay = zeros(8);
        double factor = 1.0;
        if (use.source1) factor *= c[0].delta_e;
        if (use.source2) factor *= c[1].delta_e;
        relay[4] = factor * (1.0 - d3 * d3e);
        relay[7] = factor * gain3;
        if (use.source1) relay[2] = -(use.source2 ? c[1].delta_e : 1.0) * gain3;
        if (use.source2) relay[3] = -(use.source1 ? c[0].delta_e : 1.0) * gain3;
        lp.add(std::move(relay), Sense::le, 0.0);
    }
    for (int j = 3; j < 5; ++j) {
        // M2 budget: k_j d3E (1-d_j d_jE) <= (e d3E + k3)(1-d_j) d_jE
        const double d = c[j].delta, de = c[j].delta_e;
        const double gain = (1.0 - d) * de;
        auto relay = zeros(8);
        relay[2 + j] = d3e * (1.0 - d * de);
        relay[4] = -gain;
        relay[7] = -d3e * gain;
        lp.add(std::move(relay), Sense::le, 0.0);
    }
    return lp;
}

LinearProgram capacity_lp_internal(const NetworkModel& net, double w1, double w2, SourceUse use) {
    switch (net.topology) {
        case Topology::y: return build_y_internal(net, w1, w2, use);
        case Topology::ry: return build_ry_internal(net, w1, w2);
        case Topology::x: return build_x_internal(net, w1, w2, use);
    }
    throw std::logic_error("capacity_lp: bad topology");
}

void pin_variable(LinearProgram& lp, std::size_t idx, double value) {
    auto row = zeros(lp.num_vars);
    row[idx] = 1.0;
    lp.add(std::move(row), Sense::eq, value);
}

}  // namespace

std::vector<std::string> variable_layout(Topology t) {
    switch (t) {
        case Topology::y: return {"r1", "r2", "k1", "k2", "k3"};
        case Topology::ry: return {"r1", "r2", "k1", "k2", "k3", "e"};
        case Topology::x: return {"r1", "r2", "k1", "k2", "k3", "k4", "k5", "e"};
    }
    return {};
}

LinearProgram build_y_lp(const NetworkModel& net, double w1, double w2) {
    require_topology(net, Topology::y, "build_y_lp");
    return build_y_internal(net, w1, w2, {});
}

LinearProgram build_ry_lp(const NetworkModel& net, double w1, double w2) {
    require_topology(net, Topology::ry, "build_ry_lp");
    return build_ry_internal(net, w1, w2);
}

LinearProgram build_x_lp(const NetworkModel& net, double w1, double w2) {
    require_topology(net, Topology::x, "build_x_lp");
    return build_x_internal(net, w1, w2, {});
}

LinearProgram capacity_lp(const NetworkModel& net, double w1, double w2) {
    validate_network(net);
    return capacity_lp_internal(net, w1, w2, {});
}

RegionModel capacity_region_model(const NetworkModel& net) {
    validate_network(net);
    RegionModel model;
    model.var_names = variable_layout(net.topology);
    model.build_lp = [net](double w1, double w2) { return capacity_lp(net, w1, w2); };
    return model;
}

double single_session_capacity(const NetworkModel& net, int session) {
    validate_network(net);
    if (session != 1 && session != 2) throw std::invalid_argument("session must be 1 or 2");
    SourceUse use;
    if (net.topology != Topology::ry) {
        use.source1 = session == 1;
        use.source2 = session == 2;
    }
    const double w1 = session == 1 ? 1.0 : 0.0;
    LinearProgram lp = capacity_lp_internal(net, w1, 1.0 - w1, use);
    pin_variable(lp, session == 1 ? 1 : 0, 0.0);  // other session's rate
    if (net.topology != Topology::ry)
        pin_variable(lp, session == 1 ? 3 : 2, 0.0);  // other source's key
    LpSolution sol = solve_lp(lp);
    if (sol.status != SolveStatus::optimal)
        throw std::runtime_error("single_session_capacity: solver returned non-optimal");
    return sol.value;
}

std::vector<RegionPoint> path_sharing_segment(const NetworkModel& net, std::size_t num_points) {
    if (num_points < 2) num_points = 2;
    const double c1 = single_session_capacity(net, 1);
    const double c2 = single_session_capacity(net, 2);
    std::vector<RegionPoint> pts;
    for (std::size_t i = 0; i < num_points; ++i) {
        const double t = 1.0 - double(i) / double(num_points - 1);
        RegionPoint p;
        p.r1 = t * c1;
        p.r2 = (1.0 - t) * c2;
        if (!pts.empty()) {
            double dx = pts.back().r1 - p.r1, dy = pts.back().r2 - p.r2;
            if (std::sqrt(dx * dx + dy * dy) < 1e-7) continue;
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

std::vector<std::string> link_sharing_layout(Topology t) {
    switch (t) {
        case Topology::y: return {"r1", "r2", "k1", "k3a", "k2", "k3b", "t"};
        case Topology::ry: return {"r1", "r2", "k3a", "ea", "k1", "k3b", "eb", "k2", "t"};
        case Topology::x:
            return {"r1", "r2", "k1", "k3a", "ea", "k4", "k2", "k3b", "eb", "k5", "t"};
    }
    return {};
}

LinearProgram link_sharing_lp(const NetworkModel& net, double w1, double w2) {
    validate_network(net);
    const auto& c = net.channels;
    const std::size_t nv = link_sharing_layout(net.topology).size();
    LinearProgram lp;
    lp.num_vars = nv;
    lp.objective = zeros(nv);
    lp.objective[0] = w1;
    lp.objective[1] = w2;
    const std::size_t t_idx = nv - 1;
    const double d3 = c[2].delta, d3e = c[2].delta_e;
    const double gain3 = (1.0 - d3) * d3e;

    // session = 0 shares link 3 with fraction t, session = 1 with 1 - t.
    // The shared-link time and (RY) budget rows carry t with the matching sign.
    auto add_shared_time = [&](int session, std::vector<double> row) {
        if (session == 0) {
            row[t_idx] = -gain3;
            lp.add(std::move(row), Sense::le, 0.0);
        } else {
            row[t_idx] = gain3;
            lp.add(std::move(row), Sense::le, gain3);
        }
    };

    switch (net.topology) {
        case Topology::y: {
            // vars: r1 r2 k1 k3a k2 k3b t
            for (int s = 0; s < 2; ++s) {
                const std::size_t r = s == 0 ? 0 : 1;
                const std::size_t kj = s == 0 ? 2 : 4;
                const std::size_t k3 = s == 0 ? 3 : 5;
                const double d = c[s].delta, de = c[s].delta_e;
                auto key = zeros(nv);
                key[r] = 1.0 - de;
                key[kj] = -(1.0 - d * de);
                lp.add(std::move(key), Sense::le, 0.0);
                auto key3 = zeros(nv);
                key3[r] = 1.0 - d3e;
                key3[k3] = -(1.0 - d3 * d3e);
                lp.add(std::move(key3), Sense::le, 0.0);
                auto time = zeros(nv);
                time[r] = de;
                time[kj] = 1.0;
                lp.add(std::move(time), Sense::le, (1.0 - d) * de);
                auto time3 = zeros(nv);
                time3[r] = d3e;
                time3[k3] = 1.0;
                add_shared_time(s, std::move(time3));
                auto relay = zeros(nv);
                relay[k3] = de * (1.0 - d3 * d3e);
                relay[kj] = -gain3;
                lp.add(std::move(relay), Sense::le, 0.0);
            }
            break;
        }
        case Topology::ry: {
            // vars: r1 r2 k3a ea k1 k3b eb k2 t
            const double d0 = *net.d0;
            for (int s = 0; s < 2; ++s) {
                const std::size_t r = s == 0 ? 0 : 1;
                const std::size_t k3 = s == 0 ? 2 : 5;
                const std::size_t e = s == 0 ? 3 : 6;
                const std::size_t kj = s == 0 ? 4 : 7;
                const double d = c[s].delta, de = c[s].delta_e;
                auto key3 = zeros(nv);
                key3[r] = 1.0 - d3e;
                key3[k3] = -(1.0 - d3 * d3e);
                key3[e] = -gain3;
                lp.add(std::move(key3), Sense::le, 0.0);
                auto key = zeros(nv);
                key[r] = 1.0 - de;
                key[kj] = -(1.0 - d * de);
                lp.add(std::move(key), Sense::le, 0.0);
                auto time3 = zeros(nv);
                time3[r] = d3e;
                time3[k3] = 1.0;
                time3[e] = d3e;
                add_shared_time(s, std::move(time3));
                auto time = zeros(nv);
                time[r] = de;
                time[kj] = 1.0;
                lp.add(std::move(time), Sense::le, (1.0 - d) * de);
                // the source budget d0 follows the time split
                auto budget = zeros(nv);
                budget[k3] = 1.0 - d3 * d3e;
                budget[e] = gain3;
                if (s == 0) {
                    budget[t_idx] = -d0 * gain3;
                    lp.add(std::move(budget), Sense::le, 0.0);
                } else {
                    budget[t_idx] = d0 * gain3;
                    lp.add(std::move(budget), Sense::le, d0 * gain3);
                }
                auto relay = zeros(nv);
                relay[kj] = d3e * (1.0 - d * de);
                relay[k3] = -(1.0 - d) * de;
                relay[e] = -d3e * (1.0 - d) * de;
                lp.add(std::move(relay), Sense::le, 0.0);
            }
            break;
        }
        case Topology::x: {
            // vars: r1 r2 k1 k3a ea k4 k2 k3b eb k5 t
            for (int s = 0; s < 2; ++s) {
                const std::size_t r = s == 0 ? 0 : 1;
                const std::size_t k_src = s == 0 ? 2 : 6;
                const std::size_t k3 = s == 0 ? 3 : 7;
                const std::size_t e = s == 0 ? 4 : 8;
                const std::size_t k_dst = s == 0 ? 5 : 9;
                const auto& src = c[s];
                const auto& dst = c[3 + s];
                auto key1 = zeros(nv);
                key1[r] = 1.0 - src.delta_e;
                key1[k_src] = -(1.0 - src.delta * src.delta_e);
                lp.add(std::move(key1), Sense::le, 0.0);
                auto key3 = zeros(nv);
                key3[r] = 1.0 - d3e;
                key3[k3] = -(1.0 - d3 * d3e);
                key3[e] = -gain3;
                lp.add(std::move(key3), Sense::le, 0.0);
                auto key4 = zeros(nv);
                key4[r] = 1.0 - dst.delta_e;
                key4[k_dst] = -(1.0 - dst.delta * dst.delta_e);
                lp.add(std::move(key4), Sense::le, 0.0);
                auto time1 = zeros(nv);
                time1[r] = src.delta_e;
                time1[k_src] = 1.0;
                lp.add(std::move(time1), Sense::le, (1.0 - src.delta) * src.delta_e);
                auto time3 = zeros(nv);
                time3[r] = d3e;
                time3[k3] = 1.0;
                time3[e] = d3e;
                add_shared_time(s, std::move(time3));
                auto time4 = zeros(nv);
                time4[r] = dst.delta_e;
                time4[k_dst] = 1.0;
                lp.add(std::move(time4), Sense::le, (1.0 - dst.delta) * dst.delta_e);
                // M1 budget sees only this session's source randomness
                auto m1 = zeros(nv);
                m1[k3] = src.delta_e * (1.0 - d3 * d3e);
                m1[e] = src.delta_e * gain3;
                m1[k_src] = -gain3;
                lp.add(std::move(m1), Sense::le, 0.0);
                auto m2 = zeros(nv);
                m2[k_dst] = d3e * (1.0 - dst.delta * dst.delta_e);
                m2[k3] = -(1.0 - dst.delta) * dst.delta_e;
                m2[e] = -d3e * (1.0 - dst.delta) * dst.delta_e;
                lp.add(std::move(m2), Sense::le, 0.0);
            }
            break;
        }
    }
    auto tcap = zeros(nv);
    tcap[t_idx] = 1.0;
    lp.add(std::move(tcap), Sense::le, 1.0);
    return lp;
}

double link_sharing_value(const NetworkModel& net, double w1, double w2) {
    LpSolution sol = solve_lp(link_sharing_lp(net, w1, w2));
    if (sol.status != SolveStatus::optimal)
        throw std::runtime_error("link_sharing_value: solver returned non-optimal");
    return sol.value;
}

std::vector<double> lift_rate_point(const NetworkModel& net, double r1, double r2) {
    LinearProgram lp = capacity_lp(net, 0.0, 0.0);
    for (std::size_t j = 2; j < lp.num_vars; ++j) lp.objective[j] = -1.0;  // minimal auxiliaries
    pin_variable(lp, 0, r1);
    pin_variable(lp, 1, r2);
    LpSolution sol = solve_lp(lp);
    if (sol.status != SolveStatus::optimal)
        throw std::runtime_error("lift_rate_point: rate pair outside the capacity region");
    return sol.point;
}

}  // namespace seccap
