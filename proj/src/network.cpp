#include "seccap/network.hpp"

#include <stdexcept>

namespace seccap {

std::string topology_name(Topology t) {
    switch (t) {
        case Topology::y: return "y";
        case Topology::ry: return "ry";
        case Topology::x: return "x";
    }
    return "?";
}

std::optional<Topology> topology_from_name(const std::string& name) {
    if (name == "y" || name == "Y") return Topology::y;
    if (name == "ry" || name == "RY") return Topology::ry;
    if (name == "x" || name == "X") return Topology::x;
    return std::nullopt;
}

void validate_network(const NetworkModel& net) {
    const std::size_t want = num_links(net.topology);
    if (net.channels.size() != want)
        throw std::invalid_argument("network: topology " + topology_name(net.topology) +
                                    " needs " + std::to_string(want) + " links, got " +
                                    std::to_string(net.channels.size()));
    for (std::size_t i = 0; i < net.channels.size(); ++i) {
        const auto& ch = net.channels[i];
        if (!(ch.delta >= 0.0 && ch.delta <= 1.0))
            throw std::invalid_argument("network: link " + std::to_string(i + 1) +
                                        " delta outside [0,1]");
        if (!(ch.delta_e >= 0.0 && ch.delta_e <= 1.0))
            throw std::invalid_argument("network: link " + std::to_string(i + 1) +
                                        " delta_e outside [0,1]");
    }
    if (net.topology == Topology::ry) {
        if (!net.d0) throw std::invalid_argument("network: d0 is required for topology ry");
        if (*net.d0 < 0.0) throw std::invalid_argument("network: d0 must be >= 0");
    } else if (net.d0) {
        throw std::invalid_argument("network: d0 is only valid for topology ry");
    }
}

}  // namespace seccap
