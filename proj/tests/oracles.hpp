#pragma once

// Test-side oracles, deliberately independent of the library's solver and
// elimination paths: brute-force feasibility grids with analytic / 2-D vertex
// elimination of the auxiliaries, exhaustive basis enumeration for small LPs,
// and Laplace-expansion rank over GF(2^8).

#include <cstdint>
#include <optional>
#include <vector>

#include "seccap/lp.hpp"
#include "seccap/network.hpp"

namespace oracle {

// ---- 2-D feasibility by vertex enumeration -------------------------------

// a*x + b*y <= c
struct Halfplane {
    double a, b, c;
};

bool polygon_feasible(const std::vector<Halfplane>& hs, double tol = 1e-9);

// ---- capacity grid oracles ------------------------------------------------

// True iff (r1, r2) admits feasible auxiliaries for the network's capacity LP.
bool rates_feasible(const seccap::NetworkModel& net, double r1, double r2);

// Max r1 + r2 over the grid {0, step, 2*step, ...}^2 using rates_feasible.
double grid_max_sum(const seccap::NetworkModel& net, double step);

// Max r1 over the grid with r2 = 0 and the idle source excluded.
double grid_max_single(const seccap::NetworkModel& net, int session, double step);

// ---- exhaustive LP oracle ---------------------------------------------------

// Max objective over all basic feasible solutions (every basis subset of the
// standard-form columns). nullopt when no basis is feasible.
std::optional<double> vertex_enum_max(const seccap::LinearProgram& lp);

// ---- GF(2^8) rank by minor expansion ----------------------------------------

// Determinant by Laplace expansion (first row), usable up to ~6x6.
std::uint8_t laplace_det(const std::vector<std::vector<std::uint8_t>>& m);

// Largest k such that some k x k submatrix has nonzero determinant.
std::size_t minor_rank(const std::vector<std::vector<std::uint8_t>>& rows);

// ---- min-cut polygon --------------------------------------------------------

// Pareto frontier corners of {r1 <= a, r2 <= b, r1 + r2 <= s, r >= 0},
// sorted by decreasing r1.
std::vector<std::pair<double, double>> mincut_corners(double a, double b, double s);

}  // namespace oracle
