#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "seccap/gf256.hpp"

namespace seccap {

// Dense matrix over GF(2^8) built as a Cauchy matrix: entry (i,j) = 1/(x_i + y_j)
// with x_i = i and y_j = r + j, so every square submatrix is nonsingular.
struct MdsMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<gf::Elem> data;  // row-major

    gf::Elem at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
    const gf::Elem* row(std::size_t i) const { return data.data() + i * cols; }
};

// Requires r + c <= 256 (that many distinct points exist in GF(2^8)).
// Throws std::invalid_argument otherwise or when r or c is zero.
MdsMatrix cauchy_mds(std::size_t r, std::size_t c);

// One row of the infinite "expansion family" used when combining `width` packets
// into combination number `index`. Rows with width + index < 256 come from the
// Cauchy family (deterministic, exactly MDS); beyond that the family continues
// with coefficients from a splitmix-style generator keyed by (key, index), which
// is deterministic for a fixed key. Callers that need a hard independence
// guarantee at large scale certify it afterwards with a rank check.
gf::Row expansion_row(std::size_t width, std::size_t index, std::uint64_t key);

}  // namespace seccap
