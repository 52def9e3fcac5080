#pragma once

#include <string>
#include <vector>

#include "seccap/lp.hpp"
#include "seccap/network.hpp"

namespace seccap {

// Column names of the capacity LP per topology:
//   Y : r1 r2 k1 k2 k3
//   RY: r1 r2 k1 k2 k3 e
//   X : r1 r2 k1 k2 k3 k4 k5 e
std::vector<std::string> variable_layout(Topology t);

// The secret-message capacity LPs. All constraints are stored division-cleared
// (multiplied through by the nonnegative products of delta_e factors), so
// delta_e = 0 and delta = 1 need no special cases: the cleared rows are the
// correct algebraic limits and simply pin the dead variables to zero.
// Objective is w1*r1 + w2*r2. Each builder rejects the wrong topology.
LinearProgram build_y_lp(const NetworkModel& net, double w1, double w2);
LinearProgram build_ry_lp(const NetworkModel& net, double w1, double w2);
LinearProgram build_x_lp(const NetworkModel& net, double w1, double w2);
LinearProgram capacity_lp(const NetworkModel& net, double w1, double w2);

RegionModel capacity_region_model(const NetworkModel& net);

// Max rate of one session when the other is silent and the non-participating
// source contributes no randomness (its key variable is pinned to zero and its
// term is dropped from the relay randomness budget).
double single_session_capacity(const NetworkModel& net, int session);

// The segment between (C1, 0) and (0, C2) where Ci = single_session_capacity,
// sampled at num_points values of the time split, sorted by decreasing r1.
std::vector<RegionPoint> path_sharing_segment(const NetworkModel& net, std::size_t num_points);

// Both sessions run side by side with private per-session variables; only the
// shared link's time is split t : 1-t. For RY the source randomness budget d0
// is split in the same proportion. Columns end with the split variable "t".
LinearProgram link_sharing_lp(const NetworkModel& net, double w1, double w2);
std::vector<std::string> link_sharing_layout(Topology t);

double link_sharing_value(const NetworkModel& net, double w1, double w2);

// Completes a rate pair to a full feasible LP vector (auxiliaries chosen
// minimal). Throws std::runtime_error if (r1, r2) lies outside the region.
std::vector<double> lift_rate_point(const NetworkModel& net, double r1, double r2);

}  // namespace seccap
