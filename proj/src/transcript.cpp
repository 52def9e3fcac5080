#include "seccap/transcript.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "seccap/mds.hpp"

namespace seccap {

std::uint32_t Transcript::add_row(gf::Row row) {
    rows.push_back(std::move(row));
    return static_cast<std::uint32_t>(rows.size() - 1);
}

int Transcript::destination_link(std::size_t dest) const {
    switch (topology) {
        case Topology::y: return 2;
        case Topology::ry: return dest == 0 ? 0 : 1;
        case Topology::x: return dest == 0 ? 3 : 4;
    }
    return -1;
}

RowEliminator::RowEliminator(std::size_t width)
    : width_(width), pivot_of_col_(width, -1) {}

bool RowEliminator::add(std::span<const gf::Elem> row) {
    gf::Row cur(row.begin(), row.end());
    std::size_t lead = 0;
    while (lead < width_ && cur[lead] == 0) ++lead;
    while (lead < width_) {
        const std::int32_t p = pivot_of_col_[lead];
        if (p < 0) {
            gf::scale(std::span<gf::Elem>(cur).subspan(lead), gf::inv(cur[lead]));
            cur[lead] = 1;
            pivot_of_col_[lead] = static_cast<std::int32_t>(pivots_.size());
            pivots_.push_back(std::move(cur));
            return true;
        }
        gf::axpy(cur, cur[lead], pivots_[std::size_t(p)], lead);
        while (lead < width_ && cur[lead] == 0) ++lead;
    }
    return false;
}

std::size_t rank(std::span<const gf::Row> rows) {
    if (rows.empty()) return 0;
    RowEliminator elim(rows.front().size());
    for (const auto& r : rows) {
        if (r.size() != elim.width()) throw std::invalid_argument("rank: mixed row widths");
        elim.add(r);
    }
    return elim.rank();
}

std::vector<gf::Row> privacy_amplify(std::span<const gf::Row> received, std::size_t out_count) {
    if (out_count == 0) return {};
    if (received.empty()) throw std::invalid_argument("privacy_amplify: empty input");
    if (out_count > rank(received))
        throw std::invalid_argument("privacy_amplify: out_count exceeds input rank");
    const std::size_t width = received.front().size();
    std::vector<gf::Row> out;
    out.reserve(out_count);
    for (std::size_t i = 0; i < out_count; ++i) {
        gf::Row coeffs = expansion_row(received.size(), i, /*key=*/0x70616d70);
        gf::Row acc(width, 0);
        for (std::size_t j = 0; j < received.size(); ++j) gf::axpy(acc, coeffs[j], received[j]);
        out.push_back(std::move(acc));
    }
    return out;
}

namespace {

// Distinct row ids observed on one link by one receiver class.
std::vector<std::uint32_t> view_rows(const Transcript& tr, int link, bool eavesdropper) {
    std::vector<bool> seen(tr.rows.size(), false);
    std::vector<std::uint32_t> ids;
    for (const auto& e : tr.entries) {
        if (int(e.link) != link) continue;
        const bool got = eavesdropper ? e.eav : e.legit;
        if (!got || seen[e.row]) continue;
        seen[e.row] = true;
        ids.push_back(e.row);
    }
    return ids;
}

struct SplitRanks {
    std::size_t rank_full = 0;
    std::size_t rank_zeroed = 0;
};

// Computes rank(view) and rank(view with message columns zeroed) sharing one
// elimination of the message-free rows (the bulk of any view).
SplitRanks split_ranks(const Transcript& tr, const std::vector<std::uint32_t>& ids) {
    const std::size_t width = tr.layout.total();
    const std::size_t msg = tr.layout.msg_size();
    std::vector<const gf::Row*> pure, mixed;
    for (auto id : ids) {
        const gf::Row& r = tr.rows[id];
        bool has_msg = false;
        for (std::size_t j = 0; j < msg; ++j)
            if (r[j] != 0) {
                has_msg = true;
                break;
            }
        (has_msg ? mixed : pure).push_back(&r);
    }
    RowEliminator base(width);
    for (const auto* r : pure) base.add(*r);
    RowEliminator zeroed = base;  // snapshot before the message-bearing rows
    SplitRanks out;
    {
        RowEliminator full = std::move(base);
        for (const auto* r : mixed) full.add(*r);
        out.rank_full = full.rank();
    }
    for (const auto* r : mixed) {
        gf::Row z = *r;
        std::fill(z.begin(), z.begin() + std::ptrdiff_t(msg), gf::Elem(0));
        zeroed.add(z);
    }
    out.rank_zeroed = zeroed.rank();
    return out;
}

}  // namespace

SecrecyVerdict check_secrecy(const Transcript& tr, int eav_link) {
    if (eav_link < 0 || std::size_t(eav_link) >= num_links(tr.topology))
        throw std::invalid_argument("check_secrecy: bad link index");
    auto ids = view_rows(tr, eav_link, /*eavesdropper=*/true);
    SplitRanks r = split_ranks(tr, ids);
    SecrecyVerdict v;
    v.rows = ids.size();
    v.rank_full = r.rank_full;
    v.rank_rand = r.rank_zeroed;
    v.secure = r.rank_full == r.rank_zeroed;
    return v;
}

DecodabilityVerdict check_decodability(const Transcript& tr, std::size_t dest) {
    if (dest >= tr.num_destinations())
        throw std::invalid_argument("check_decodability: bad destination");
    auto ids = view_rows(tr, tr.destination_link(dest), /*eavesdropper=*/false);
    SplitRanks r = split_ranks(tr, ids);
    DecodabilityVerdict v;
    v.owed = dest < tr.owed.size() ? tr.owed[dest].size() : 0;
    v.rank_full = r.rank_full;
    v.rank_msg_zeroed = r.rank_zeroed;
    v.decodable = r.rank_full - r.rank_zeroed == v.owed;
    return v;
}

void write_transcript(std::ostream& os, const Transcript& tr) {
    static const char* hex = "0123456789abcdef";
    os << "seccap-transcript v1\n";
    os << "topology " << topology_name(tr.topology) << '\n';
    os << "basis " << tr.layout.n1 << ' ' << tr.layout.n2 << ' ' << tr.layout.rand1 << ' '
       << tr.layout.rand2 << '\n';
    os << "destinations " << tr.num_destinations() << '\n';
    for (std::size_t d = 0; d < tr.num_destinations(); ++d) {
        os << "owed " << d;
        if (d < tr.owed.size())
            for (auto c : tr.owed[d]) os << ' ' << c;
        os << '\n';
    }
    os << "entries " << tr.entries.size() << '\n';
    std::string line;
    for (const auto& e : tr.entries) {
        line.clear();
        line += std::to_string(e.link);
        line += ' ';
        line += std::to_string(e.slot);
        line += ' ';
        line += e.legit ? '1' : '0';
        line += e.eav ? '1' : '0';
        line += ' ';
        for (gf::Elem b : tr.rows[e.row]) {
            line += hex[b >> 4];
            line += hex[b & 0xF];
        }
        os << line << '\n';
    }
}

namespace {

int hex_val(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

}  // namespace

Transcript read_transcript(std::istream& is) {
    Transcript tr;
    std::string tok, line;
    if (!std::getline(is, line) || line != "seccap-transcript v1")
        throw std::runtime_error("transcript: bad header");
    if (!(is >> tok) || tok != "topology" || !(is >> tok))
        throw std::runtime_error("transcript: missing topology");
    auto topo = topology_from_name(tok);
    if (!topo) throw std::runtime_error("transcript: unknown topology " + tok);
    tr.topology = *topo;
    if (!(is >> tok) || tok != "basis" ||
        !(is >> tr.layout.n1 >> tr.layout.n2 >> tr.layout.rand1 >> tr.layout.rand2))
        throw std::runtime_error("transcript: bad basis line");
    std::size_t dests = 0;
    if (!(is >> tok) || tok != "destinations" || !(is >> dests) || dests != tr.num_destinations())
        throw std::runtime_error("transcript: bad destinations line");
    std::getline(is, line);
    tr.owed.resize(dests);
    for (std::size_t d = 0; d < dests; ++d) {
        if (!std::getline(is, line)) throw std::runtime_error("transcript: missing owed line");
        std::istringstream ls(line);
        std::size_t idx = 0;
        if (!(ls >> tok) || tok != "owed" || !(ls >> idx) || idx != d)
            throw std::runtime_error("transcript: bad owed line");
        std::uint32_t c;
        while (ls >> c) tr.owed[d].push_back(c);
    }
    std::size_t n_entries = 0;
    if (!(is >> tok) || tok != "entries" || !(is >> n_entries))
        throw std::runtime_error("transcript: bad entries line");
    std::getline(is, line);
    const std::size_t width = tr.layout.total();
    for (std::size_t i = 0; i < n_entries; ++i) {
        if (!std::getline(is, line)) throw std::runtime_error("transcript: truncated entries");
        std::istringstream ls(line);
        unsigned link = 0;
        std::uint32_t slot = 0;
        std::string flags, hex_row;
        if (!(ls >> link >> slot >> flags >> hex_row) || flags.size() != 2 ||
            hex_row.size() != 2 * width)
            throw std::runtime_error("transcript: bad entry line " + std::to_string(i));
        gf::Row row(width);
        for (std::size_t j = 0; j < width; ++j) {
            int hi = hex_val(hex_row[2 * j]), lo = hex_val(hex_row[2 * j + 1]);
            if (hi < 0 || lo < 0) throw std::runtime_error("transcript: bad hex");
            row[j] = static_cast<gf::Elem>((hi << 4) | lo);
        }
        TranscriptEntry e;
        e.link = static_cast<std::uint16_t>(link);
        e.slot = slot;
        e.legit = flags[0] == '1';
        e.eav = flags[1] == '1';
        e.row = tr.add_row(std::move(row));
        tr.entries.push_back(e);
    }
    return tr;
}

}  // namespace seccap
