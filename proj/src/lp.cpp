#include "seccap/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace seccap {

namespace {
constexpr double kTol = 1e-9;
}

void LinearProgram::add(std::vector<double> coeffs, Sense sense, double rhs) {
    constraints.push_back({std::move(coeffs), sense, rhs});
}

bool LinearProgram::well_formed() const {
    if (objective.size() != num_vars) return false;
    for (const auto& c : constraints)
        if (c.coeffs.size() != num_vars) return false;
    return true;
}

bool check_feasible(const LinearProgram& lp, std::span<const double> point, double tol) {
    if (point.size() != lp.num_vars)
        throw std::invalid_argument("check_feasible: point length != num_vars");
    for (double v : point)
        if (v < -tol) return false;
    for (const auto& c : lp.constraints) {
        double lhs = 0.0;
        for (std::size_t j = 0; j < lp.num_vars; ++j) lhs += c.coeffs[j] * point[j];
        switch (c.sense) {
            case Sense::le:
                if (lhs > c.rhs + tol) return false;
                break;
            case Sense::ge:
                if (lhs < c.rhs - tol) return false;
                break;
            case Sense::eq:
                if (std::abs(lhs - c.rhs) > tol) return false;
                break;
        }
    }
    return true;
}

namespace {

// Dense tableau simplex. Columns: structurals, then one slack/surplus per
// inequality, then artificials. basis[i] holds the variable of row i.
class Tableau {
  public:
    explicit Tableau(const LinearProgram& lp) : n_(lp.num_vars) {
        const std::size_t m = lp.constraints.size();
        std::size_t n_slack = 0;
        for (const auto& c : lp.constraints)
            if (c.sense != Sense::eq) ++n_slack;

        slack_begin_ = n_;
        art_begin_ = n_ + n_slack;
        // Worst case one artificial per row.
        cols_ = art_begin_ + m;
        rows_.assign(m, std::vector<double>(cols_ + 1, 0.0));
        basis_.assign(m, std::size_t(-1));

        std::size_t next_slack = slack_begin_;
        std::size_t next_art = art_begin_;
        for (std::size_t i = 0; i < m; ++i) {
            const auto& c = lp.constraints[i];
            double sign = 1.0;
            Sense sense = c.sense;
            if (c.rhs < 0) {
                sign = -1.0;
                if (sense == Sense::le)
                    sense = Sense::ge;
                else if (sense == Sense::ge)
                    sense = Sense::le;
            }
            auto& row = rows_[i];
            for (std::size_t j = 0; j < n_; ++j) row[j] = sign * c.coeffs[j];
            row[cols_] = sign * c.rhs;
            if (c.sense != Sense::eq) {
                row[next_slack] = (sense == Sense::le) ? 1.0 : -1.0;
                if (sense == Sense::le) basis_[i] = next_slack;
                ++next_slack;
            }
            if (basis_[i] == std::size_t(-1)) {
                row[next_art] = 1.0;
                basis_[i] = next_art;
                ++next_art;
            }
        }
        art_end_ = next_art;
    }

    SolveStatus solve(const std::vector<double>& objective, std::vector<double>* point,
                      double* value) {
        // Phase 1: drive the artificial variables to zero.
        if (art_end_ > art_begin_) {
            std::vector<double> phase1(cols_, 0.0);
            for (std::size_t j = art_begin_; j < art_end_; ++j) phase1[j] = -1.0;
            build_cost_row(phase1);
            if (run_phase(art_end_) == SolveStatus::unbounded)
                return SolveStatus::infeasible;  // cannot happen, defensive
            if (cost_value_ < -kTol) return SolveStatus::infeasible;
            expel_artificials();
        }

        std::vector<double> full_obj(cols_, 0.0);
        std::copy(objective.begin(), objective.end(), full_obj.begin());
        build_cost_row(full_obj);
        SolveStatus st = run_phase(art_begin_);
        if (st != SolveStatus::optimal) return st;

        point->assign(n_, 0.0);
        for (std::size_t i = 0; i < rows_.size(); ++i)
            if (basis_[i] < n_) (*point)[basis_[i]] = rows_[i][cols_];
        double v = 0.0;
        for (std::size_t j = 0; j < n_; ++j) v += objective[j] * (*point)[j];
        *value = v;
        return SolveStatus::optimal;
    }

  private:
    void build_cost_row(const std::vector<double>& c) {
        cost_ = c;
        cost_.resize(cols_, 0.0);
        cost_value_ = 0.0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            double cb = c[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < cols_; ++j) cost_[j] -= cb * rows_[i][j];
            cost_value_ += cb * rows_[i][cols_];
        }
    }

    // Bland's rule: entering = lowest-index column with positive reduced cost,
    // leaving = lexicographic min of (ratio, basis index).
    SolveStatus run_phase(std::size_t usable_cols) {
        for (;;) {
            std::size_t enter = usable_cols;
            for (std::size_t j = 0; j < usable_cols; ++j) {
                if (cost_[j] > kTol) {
                    enter = j;
                    break;
                }
            }
            if (enter == usable_cols) return SolveStatus::optimal;

            std::size_t leave = rows_.size();
            double best_ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rows_.size(); ++i) {
                double a = rows_[i][enter];
                if (a <= kTol) continue;
                double ratio = rows_[i][cols_] / a;
                if (ratio < best_ratio - kTol ||
                    (ratio < best_ratio + kTol &&
                     (leave == rows_.size() || basis_[i] < basis_[leave]))) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave == rows_.size()) return SolveStatus::unbounded;
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t r, std::size_t c) {
        auto& prow = rows_[r];
        const double inv = 1.0 / prow[c];
        for (auto& v : prow) v *= inv;
        prow[c] = 1.0;
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (i == r) continue;
            double f = rows_[i][c];
            if (f == 0.0) continue;
            auto& row = rows_[i];
            for (std::size_t j = 0; j <= cols_; ++j) row[j] -= f * prow[j];
            row[c] = 0.0;
        }
        double f = cost_[c];
        if (f != 0.0) {
            for (std::size_t j = 0; j < cols_; ++j) cost_[j] -= f * prow[j];
            cost_[c] = 0.0;
            cost_value_ += f * prow[cols_];
        }
        basis_[r] = c;
    }

    // After phase 1, pivot any artificial still in the basis out on a real
    // column; rows with no such column are redundant and harmless to keep.
    void expel_artificials() {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            if (basis_[i] < art_begin_) continue;
            for (std::size_t j = 0; j < art_begin_; ++j) {
                if (std::abs(rows_[i][j]) > kTol) {
                    pivot(i, j);
                    break;
                }
            }
        }
    }

    std::size_t n_, slack_begin_, art_begin_, art_end_ = 0, cols_;
    std::vector<std::vector<double>> rows_;
    std::vector<std::size_t> basis_;
    std::vector<double> cost_;
    double cost_value_ = 0.0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp) {
    if (!lp.well_formed()) throw std::invalid_argument("solve_lp: malformed program");
    LpSolution sol;
    if (lp.constraints.empty()) {
        // Only nonnegativity: bounded iff no objective coefficient is positive.
        for (double c : lp.objective)
            if (c > 0) {
                sol.status = SolveStatus::unbounded;
                return sol;
            }
        sol.status = SolveStatus::optimal;
        sol.point.assign(lp.num_vars, 0.0);
        sol.value = 0.0;
        return sol;
    }
    Tableau t(lp);
    sol.status = t.solve(lp.objective, &sol.point, &sol.value);
    return sol;
}

std::vector<RegionPoint> trace_region(const RegionModel& model, std::size_t num_angles) {
    if (num_angles < 2) throw std::invalid_argument("trace_region: num_angles must be >= 2");

    std::size_t i1 = model.var_names.size(), i2 = i1;
    for (std::size_t i = 0; i < model.var_names.size(); ++i) {
        if (model.var_names[i] == "r1") i1 = i;
        if (model.var_names[i] == "r2") i2 = i;
    }
    if (i1 >= model.var_names.size() || i2 >= model.var_names.size())
        throw std::invalid_argument("trace_region: model lacks r1/r2 variables");

    std::vector<std::pair<double, double>> weights;
    const double pi_2 = std::acos(0.0);
    for (std::size_t k = 0; k < num_angles; ++k) {
        double theta = pi_2 * double(k) / double(num_angles - 1);
        weights.emplace_back(std::cos(theta), std::sin(theta));
    }
    weights.emplace_back(1.0, 0.0);
    weights.emplace_back(0.0, 1.0);
    weights.emplace_back(1.0, 1.0);

    std::vector<RegionPoint> points;
    for (auto [w1, w2] : weights) {
        LinearProgram lp = model.build_lp(w1, w2);
        LpSolution sol = solve_lp(lp);
        if (sol.status == SolveStatus::infeasible) {
            std::vector<double> zero(lp.num_vars, 0.0);
            if (check_feasible(lp, zero, kTol)) return {RegionPoint{}};
            throw std::runtime_error("trace_region: empty feasible region");
        }
        if (sol.status == SolveStatus::unbounded)
            throw std::runtime_error("trace_region: unbounded capacity objective");
        RegionPoint p;
        p.r1 = sol.point[i1];
        p.r2 = sol.point[i2];
        for (std::size_t j = 0; j < model.var_names.size(); ++j)
            if (j != i1 && j != i2) p.aux.emplace_back(model.var_names[j], sol.point[j]);
        bool dup = false;
        for (const auto& q : points) {
            double dx = q.r1 - p.r1, dy = q.r2 - p.r2;
            if (std::sqrt(dx * dx + dy * dy) < 1e-7) {
                dup = true;
                break;
            }
        }
        if (!dup) points.push_back(std::move(p));
    }
    std::sort(points.begin(), points.end(), [](const RegionPoint& a, const RegionPoint& b) {
        if (a.r1 != b.r1) return a.r1 > b.r1;
        return a.r2 < b.r2;
    });
    return points;
}

}  // namespace seccap
