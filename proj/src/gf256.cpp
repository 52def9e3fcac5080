#include "seccap/gf256.hpp"

#include <array>
#include <stdexcept>

namespace seccap::gf {

namespace {

struct Tables {
    std::array<Elem, 256> log{};
    std::array<Elem, 512> exp{};
    std::array<Elem, 256> inverse{};
    // Full 256x256 product table; row-major so mul_row(a) is contiguous.
    std::array<Elem, 256 * 256> product{};

    Tables() {
        // 0x03 generates the multiplicative group under 0x11B.
        unsigned x = 1;
        for (unsigned i = 0; i < 255; ++i) {
            exp[i] = static_cast<Elem>(x);
            log[x] = static_cast<Elem>(i);
            unsigned next = x ^ (x << 1);  // multiply by 0x03 = x * (1 + g)
            if (next & 0x100) next ^= kPoly;
            x = next & 0xFF;
        }
        for (unsigned i = 255; i < 512; ++i) exp[i] = exp[i - 255];
        inverse[0] = 0;
        for (unsigned a = 1; a < 256; ++a) inverse[a] = exp[255 - log[a]];
        for (unsigned a = 1; a < 256; ++a)
            for (unsigned b = 1; b < 256; ++b)
                product[(a << 8) | b] = exp[log[a] + log[b]];
    }
};

const Tables& tables() {
    static const Tables t;
    return t;
}

}  // namespace

Elem mul(Elem a, Elem b) { return tables().product[(unsigned(a) << 8) | b]; }

Elem inv(Elem a) {
    if (a == 0) throw std::domain_error("gf256: zero has no inverse");
    return tables().inverse[a];
}

const Elem* mul_row(Elem a) { return tables().product.data() + (std::size_t(a) << 8); }

void axpy(std::span<Elem> dst, Elem a, std::span<const Elem> src, std::size_t from) {
    if (a == 0) return;
    const Elem* m = mul_row(a);
    const std::size_t n = src.size();
    for (std::size_t i = from; i < n; ++i) dst[i] ^= m[src[i]];
}

void scale(std::span<Elem> row, Elem a) {
    const Elem* m = mul_row(a);
    for (auto& v : row) v = m[v];
}

}  // namespace seccap::gf
