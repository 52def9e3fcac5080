#pragma once

#include <string>
#include <vector>

#include "seccap/lp.hpp"

namespace seccap {

// CSV with header r1,r2,<aux...>; values printed with 9 significant digits.
std::string region_csv(const std::vector<RegionPoint>& points);

struct CompareRow {
    double w1 = 0, w2 = 0;
    double capacity = 0, link_sharing = 0, path_sharing = 0;
};

// Per-angle values of the three strategies plus capacity/link and
// capacity/path ratio columns, closed by "min" and "max" summary rows.
std::string compare_csv(const std::vector<CompareRow>& rows);

struct SvgSeries {
    std::string label;
    std::string color;
    std::vector<std::pair<double, double>> points;
};

// Self-contained polyline plot of one or more rate-region frontiers.
std::string region_svg(const std::vector<SvgSeries>& series, const std::string& title);

}  // namespace seccap
