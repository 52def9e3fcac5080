#include <functional>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "oracles.hpp"
#include "seccap/gf256.hpp"
#include "seccap/mds.hpp"

using namespace seccap;

TEST_CASE("gf256 inverses are exhaustively correct") {
    for (unsigned a = 1; a < 256; ++a) {
        gf::Elem i = gf::inv(static_cast<gf::Elem>(a));
        CHECK(gf::mul(static_cast<gf::Elem>(a), i) == 1);
    }
    CHECK_THROWS_AS(gf::inv(0), std::domain_error);
}

TEST_CASE("gf256 associativity and distributivity on random triples") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10000; ++t) {
        gf::Elem a = rng() & 0xFF, b = rng() & 0xFF, c = rng() & 0xFF;
        CHECK(gf::mul(a, gf::mul(b, c)) == gf::mul(gf::mul(a, b), c));
        CHECK(gf::mul(a, gf::add(b, c)) == gf::add(gf::mul(a, b), gf::mul(a, c)));
        CHECK(gf::add(a, gf::add(b, c)) == gf::add(gf::add(a, b), c));
    }
}

TEST_CASE("gf256 axpy matches per-element products") {
    std::mt19937_64 rng(11);
    gf::Row src(64), dst(64), expect(64);
    for (auto& v : src) v = rng() & 0xFF;
    for (auto& v : dst) v = rng() & 0xFF;
    expect = dst;
    gf::Elem a = 0x53;
    for (std::size_t i = 0; i < src.size(); ++i) expect[i] ^= gf::mul(a, src[i]);
    gf::axpy(dst, a, src);
    CHECK(dst == expect);
}

namespace {

std::vector<std::vector<std::uint8_t>> to_rows(const MdsMatrix& m) {
    std::vector<std::vector<std::uint8_t>> rows(m.rows, std::vector<std::uint8_t>(m.cols));
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) rows[i][j] = m.at(i, j);
    return rows;
}

// every square submatrix of sizes 1..k nonsingular (Laplace determinant oracle)
bool all_minors_nonsingular(const MdsMatrix& m, std::size_t upto) {
    auto rows = to_rows(m);
    for (std::size_t k = 1; k <= upto; ++k) {
        std::vector<std::size_t> rsel(k), csel(k);
        // iterate all row/col subsets of size k
        std::function<bool(std::size_t, std::size_t)> rrec = [&](std::size_t rs, std::size_t rd) {
            if (rd == k) {
                std::function<bool(std::size_t, std::size_t)> crec = [&](std::size_t cs,
                                                                         std::size_t cd) {
                    if (cd == k) {
                        std::vector<std::vector<std::uint8_t>> sub(k, std::vector<std::uint8_t>(k));
                        for (std::size_t i = 0; i < k; ++i)
                            for (std::size_t j = 0; j < k; ++j) sub[i][j] = rows[rsel[i]][csel[j]];
                        return oracle::laplace_det(sub) != 0;
                    }
                    for (std::size_t j = cs; j + (k - cd - 1) < m.cols; ++j) {
                        csel[cd] = j;
                        if (!crec(j + 1, cd + 1)) return false;
                    }
                    return true;
                };
                return crec(0, 0);
            }
            for (std::size_t i = rs; i + (k - rd - 1) < m.rows; ++i) {
                rsel[rd] = i;
                if (!rrec(i + 1, rd + 1)) return false;
            }
            return true;
        };
        if (!rrec(0, 0)) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("cauchy_mds basics") {
    MdsMatrix one = cauchy_mds(1, 1);
    CHECK(one.at(0, 0) != 0);

    MdsMatrix m3 = cauchy_mds(3, 3);
    CHECK(oracle::laplace_det(to_rows(m3)) != 0);

    CHECK_THROWS_AS(cauchy_mds(200, 200), std::invalid_argument);
    CHECK_THROWS_AS(cauchy_mds(0, 3), std::invalid_argument);
}

TEST_CASE("cauchy_mds 4x6: all 2x2 minors nonsingular") {
    CHECK(all_minors_nonsingular(cauchy_mds(4, 6), 2));
}

TEST_CASE("cauchy_mds 5x5: exhaustively MDS") {
    CHECK(all_minors_nonsingular(cauchy_mds(5, 5), 5));
}

TEST_CASE("expansion_row continues the family deterministically") {
    auto a = expansion_row(10, 3, 42);
    auto b = expansion_row(10, 3, 42);
    CHECK(a == b);
    // small indices coincide with the Cauchy family
    MdsMatrix c = cauchy_mds(20, 10);  // not the same shape, just checks determinism
    auto r0 = expansion_row(10, 0, 1);
    auto r1 = expansion_row(10, 0, 2);
    CHECK(r0 == r1);  // Cauchy range ignores the key
    auto big0 = expansion_row(300, 5, 9);
    auto big1 = expansion_row(300, 5, 9);
    CHECK(big0 == big1);
    auto big2 = expansion_row(300, 5, 10);
    CHECK(big0 != big2);  // key matters beyond the Cauchy range
    (void)c;
}
