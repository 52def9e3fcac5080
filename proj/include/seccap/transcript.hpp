#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "seccap/gf256.hpp"
#include "seccap/network.hpp"

namespace seccap {

// Coefficient basis of one simulation run. Every transmitted packet is a linear
// combination of these symbols, laid out as
//   [ message 1 | message 2 | randomness 1 | randomness 2 ]
// For Y and X the randomness blocks hold the two sources' fresh packets; for RY
// block 1 holds the source's rate-limited randomness and block 2 is empty.
struct BasisLayout {
    std::size_t n1 = 0, n2 = 0, rand1 = 0, rand2 = 0;

    std::size_t msg_size() const { return n1 + n2; }
    std::size_t total() const { return n1 + n2 + rand1 + rand2; }
    std::size_t w1_at(std::size_t i) const { return i; }
    std::size_t w2_at(std::size_t i) const { return n1 + i; }
    std::size_t rand1_at(std::size_t i) const { return n1 + n2 + i; }
    std::size_t rand2_at(std::size_t i) const { return n1 + n2 + rand1 + i; }
};

// One transmission slot: which link, which coefficient row went on the air,
// and who received it. Retransmissions repeat the same row id.
struct TranscriptEntry {
    std::uint16_t link = 0;  // 0-based link index
    std::uint32_t slot = 0;
    std::uint32_t row = 0;
    bool legit = false;
    bool eav = false;
};

struct Transcript {
    Topology topology = Topology::y;
    BasisLayout layout;
    std::vector<gf::Row> rows;
    std::vector<TranscriptEntry> entries;
    // per destination: the message coordinates the run delivered there
    std::vector<std::vector<std::uint32_t>> owed;

    std::uint32_t add_row(gf::Row row);
    std::size_t num_destinations() const { return topology == Topology::y ? 1 : 2; }
    // link (0-based) whose receptions belong to the given destination
    int destination_link(std::size_t dest) const;
};

// Incremental Gaussian elimination over GF(2^8): feed rows, read off the rank.
class RowEliminator {
  public:
    explicit RowEliminator(std::size_t width);

    bool add(std::span<const gf::Elem> row);  // true iff the rank grew
    std::size_t rank() const { return pivots_.size(); }
    std::size_t width() const { return width_; }

  private:
    std::size_t width_;
    std::vector<gf::Row> pivots_;
    std::vector<std::int32_t> pivot_of_col_;
};

// Rank of a set of equal-width rows; 0 for empty input.
std::size_t rank(std::span<const gf::Row> rows);

// out_count MDS combinations of the received rows, guaranteed jointly
// independent of any eavesdropper view that misses at least out_count of them.
// Deterministic; rejects out_count > rank(received).
std::vector<gf::Row> privacy_amplify(std::span<const gf::Row> received, std::size_t out_count);

struct SecrecyVerdict {
    bool secure = true;
    std::size_t rows = 0;       // distinct rows in the eavesdropper's view
    std::size_t rank_full = 0;  // rank with message columns present
    std::size_t rank_rand = 0;  // rank of the randomness blocks alone
};

// Perfect-secrecy test for one single-link eavesdropper hypothesis: the view
// is secure iff its message columns add no rank beyond the randomness columns,
// i.e. every observation is independent of (W1, W2).
SecrecyVerdict check_secrecy(const Transcript& tr, int eav_link);

struct DecodabilityVerdict {
    bool decodable = true;
    std::size_t owed = 0;
    std::size_t rank_full = 0;
    std::size_t rank_msg_zeroed = 0;
};

// The destination can decode iff zeroing the message columns drops the rank of
// its view by exactly the number of message symbols delivered to it.
DecodabilityVerdict check_decodability(const Transcript& tr, std::size_t dest);

// Line-oriented audit format (documented in the README): header, owed lists,
// then one line per slot with link, slot, flags and hex coefficients.
void write_transcript(std::ostream& os, const Transcript& tr);
Transcript read_transcript(std::istream& is);  // throws std::runtime_error on bad input

}  // namespace seccap
