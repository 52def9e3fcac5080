#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace seccap::gf {

// Arithmetic in GF(2^8) with irreducible polynomial x^8 + x^4 + x^3 + x + 1 (0x11B).
// Addition is XOR; multiplication/inverse go through log/exp tables built once at startup.

using Elem = std::uint8_t;
using Row = std::vector<std::uint8_t>;

inline constexpr unsigned kPoly = 0x11B;

Elem mul(Elem a, Elem b);
Elem inv(Elem a);  // throws std::domain_error on a == 0

inline Elem add(Elem a, Elem b) { return static_cast<Elem>(a ^ b); }

// Pointer to the 256-byte multiplication row for a fixed left factor.
// Hot loops index it directly instead of calling mul() per byte.
const Elem* mul_row(Elem a);

// dst[i] ^= a * src[i] for i in [from, src.size())
void axpy(std::span<Elem> dst, Elem a, std::span<const Elem> src, std::size_t from = 0);

// row[i] *= a
void scale(std::span<Elem> row, Elem a);

}  // namespace seccap::gf
