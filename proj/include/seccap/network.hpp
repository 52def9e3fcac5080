#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace seccap {

// One erasure link: delta is the legitimate receiver's erasure probability,
// delta_e the eavesdropper's.
struct ChannelParams {
    double delta = 0.0;
    double delta_e = 0.0;
};

enum class Topology { y, ry, x };

// Link numbering:
//   Y : 1,2 = source->relay, 3 = relay->destination
//   RY: 3 = source->relay, 1,2 = relay->destination j
//   X : 1,2 = source->M1, 3 = M1->M2, 4,5 = M2->destination j-3
// channels[i] holds link i+1. d0 is the source randomness rate, RY only.
struct NetworkModel {
    Topology topology = Topology::y;
    std::vector<ChannelParams> channels;
    std::optional<double> d0;
};

inline std::size_t num_links(Topology t) { return t == Topology::x ? 5 : 3; }

std::string topology_name(Topology t);
std::optional<Topology> topology_from_name(const std::string& name);

// Throws std::invalid_argument with a descriptive message on bad probabilities,
// wrong channel count, or missing/negative d0.
void validate_network(const NetworkModel& net);

}  // namespace seccap
