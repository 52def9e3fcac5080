#include "seccap/region_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace seccap {

namespace {

std::string num9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string num4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

}  // namespace

std::string region_csv(const std::vector<RegionPoint>& points) {
    std::string out = "r1,r2";
    if (!points.empty())
        for (const auto& [name, v] : points.front().aux) out += "," + name;
    out += '\n';
    for (const auto& p : points) {
        out += num9(p.r1);
        out += ',';
        out += num9(p.r2);
        for (const auto& [name, v] : p.aux) {
            out += ',';
            out += num9(v);
        }
        out += '\n';
    }
    return out;
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::string out = "row,w1,w2,capacity,link_sharing,path_sharing,ratio_link,ratio_path\n";
    double min_l = HUGE_VAL, max_l = -HUGE_VAL, min_p = HUGE_VAL, max_p = -HUGE_VAL;
    auto ratio = [](double a, double b) { return b > 0 ? a / b : (a > 0 ? HUGE_VAL : 1.0); };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const double rl = ratio(r.capacity, r.link_sharing);
        const double rp = ratio(r.capacity, r.path_sharing);
        min_l = std::min(min_l, rl);
        max_l = std::max(max_l, rl);
        min_p = std::min(min_p, rp);
        max_p = std::max(max_p, rp);
        out += std::to_string(i) + ',' + num9(r.w1) + ',' + num9(r.w2) + ',' + num9(r.capacity) +
               ',' + num9(r.link_sharing) + ',' + num9(r.path_sharing) + ',' + num9(rl) + ',' +
               num9(rp) + '\n';
    }
    if (!rows.empty()) {
        out += "min,,,,,," + num9(min_l) + ',' + num9(min_p) + '\n';
        out += "max,,,,,," + num9(max_l) + ',' + num9(max_p) + '\n';
    }
    return out;
}

std::string region_svg(const std::vector<SvgSeries>& series, const std::string& title) {
    const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    double xmax = 1e-12, ymax = 1e-12;
    for (const auto& s : series)
        for (auto [x, y] : s.points) {
            xmax = std::max(xmax, x);
            ymax = std::max(ymax, y);
        }
    xmax *= 1.05;
    ymax *= 1.05;
    auto px = [&](double x) { return ml + (W - ml - mr) * (x / xmax); };
    auto py = [&](double y) { return H - mb - (H - mt - mb) * (y / ymax); };

    std::string svg =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
        "viewBox=\"0 0 640 480\">\n";
    svg += "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
    svg += "<text x=\"320\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">" + title + "</text>\n";
    // axes
    svg += "<line x1=\"" + num4(ml) + "\" y1=\"" + num4(H - mb) + "\" x2=\"" + num4(W - mr) +
           "\" y2=\"" + num4(H - mb) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + num4(ml) + "\" y1=\"" + num4(H - mb) + "\" x2=\"" + num4(ml) +
           "\" y2=\"" + num4(mt) + "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = xmax * t / 4.0, fy = ymax * t / 4.0;
        svg += "<text x=\"" + num4(px(fx)) + "\" y=\"" + num4(H - mb + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               num4(fx) + "</text>\n";
        svg += "<text x=\"" + num4(ml - 8) + "\" y=\"" + num4(py(fy) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + num4(fy) +
               "</text>\n";
    }
    svg += "<text x=\"" + num4((ml + W - mr) / 2) + "\" y=\"" + num4(H - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">R1 "
           "(packets/slot)</text>\n";
    svg += "<text x=\"18\" y=\"" + num4((mt + H - mb) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + num4((mt + H - mb) / 2) + ")\">R2 (packets/slot)</text>\n";

    double legend_y = mt + 10;
    for (const auto& s : series) {
        if (s.points.empty()) continue;
        std::string pts;
        for (auto [x, y] : s.points) pts += num4(px(x)) + "," + num4(py(y)) + " ";
        svg += "<polyline fill=\"none\" stroke=\"" + s.color + "\" stroke-width=\"1.8\" points=\"" +
               pts + "\"/>\n";
        svg += "<line x1=\"" + num4(W - mr - 150) + "\" y1=\"" + num4(legend_y) + "\" x2=\"" +
               num4(W - mr - 120) + "\" y2=\"" + num4(legend_y) + "\" stroke=\"" + s.color +
               "\" stroke-width=\"1.8\"/>\n";
        svg += "<text x=\"" + num4(W - mr - 114) + "\" y=\"" + num4(legend_y + 4) +
               "\" font-family=\"sans-serif\" font-size=\"12\">" + s.label + "</text>\n";
        legend_y += 18;
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace seccap
