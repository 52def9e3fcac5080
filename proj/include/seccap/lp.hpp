#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace seccap {

enum class Sense { le, ge, eq };

struct LinearConstraint {
    std::vector<double> coeffs;
    Sense sense = Sense::le;
    double rhs = 0.0;
};

// Dense maximization LP over nonnegative variables.
struct LinearProgram {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<LinearConstraint> constraints;

    void add(std::vector<double> coeffs, Sense sense, double rhs);
    bool well_formed() const;
};

enum class SolveStatus { optimal, infeasible, unbounded };

struct LpSolution {
    SolveStatus status = SolveStatus::infeasible;
    double value = 0.0;
    std::vector<double> point;
};

// Two-phase primal simplex with Bland's anti-cycling pivot rule; deterministic
// for a fixed input. Optimal points are vertices of the feasible polytope.
// Throws std::invalid_argument on malformed input.
LpSolution solve_lp(const LinearProgram& lp);

// True iff every constraint and the nonnegativity bounds hold within tol.
bool check_feasible(const LinearProgram& lp, std::span<const double> point, double tol);

// One point of a two-dimensional rate region: the first two LP variables plus
// the remaining variables by name.
struct RegionPoint {
    double r1 = 0.0;
    double r2 = 0.0;
    std::vector<std::pair<std::string, double>> aux;
};

// A family of LPs indexed by an objective weight pair. var_names must match the
// LP's columns; the entries named "r1" and "r2" are the traced coordinates.
struct RegionModel {
    std::function<LinearProgram(double w1, double w2)> build_lp;
    std::vector<std::string> var_names;
};

// Sweeps objectives (cos t, sin t) for num_angles values of t uniform in
// [0, pi/2] plus the pure objectives (1,0), (0,1), (1,1). Duplicate vertices
// (Euclidean distance < 1e-7) are removed; output is sorted by decreasing r1.
// An infeasible model is reported as the single point (0,0) when that point is
// feasible; otherwise throws std::runtime_error.
std::vector<RegionPoint> trace_region(const RegionModel& model, std::size_t num_angles);

}  // namespace seccap
