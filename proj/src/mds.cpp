#include "seccap/mds.hpp"

#include <stdexcept>

namespace seccap {

MdsMatrix cauchy_mds(std::size_t r, std::size_t c) {
    if (r == 0 || c == 0) throw std::invalid_argument("cauchy_mds: empty matrix");
    if (r + c > 256) throw std::invalid_argument("cauchy_mds: r + c exceeds 256 distinct field points");
    MdsMatrix m;
    m.rows = r;
    m.cols = c;
    m.data.resize(r * c);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < c; ++j) {
            // x_i = i, y_j = r + j: disjoint point sets, so x_i ^ y_j != 0.
            m.data[i * c + j] = gf::inv(static_cast<gf::Elem>(i ^ (r + j)));
        }
    }
    return m;
}

namespace {

std::uint64_t splitmix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

gf::Row expansion_row(std::size_t width, std::size_t index, std::uint64_t key) {
    gf::Row row(width);
    if (width == 0) return row;
    if (width + index < 256) {
        // Reuse the Cauchy points: y_j = j, x = width + index.
        for (std::size_t j = 0; j < width; ++j)
            row[j] = gf::inv(static_cast<gf::Elem>(j ^ (width + index)));
        return row;
    }
    std::uint64_t state = splitmix(key ^ (0xA24BAED4963EE407ULL + index));
    std::size_t have = 0;
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < width; ++j) {
        if (have == 0) {
            state = splitmix(state);
            bits = state;
            have = 8;
        }
        row[j] = static_cast<gf::Elem>(bits & 0xFF);
        bits >>= 8;
        --have;
    }
    return row;
}

}  // namespace seccap
