#include "seccap/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "seccap/capacity.hpp"
#include "seccap/mds.hpp"

namespace seccap {

Rng Rng::keyed(std::uint64_t master, std::uint32_t link, std::uint32_t tag) {
    std::seed_seq seq{std::uint32_t(master), std::uint32_t(master >> 32), link, tag};
    Rng r(0);
    r.eng_.seed(seq);
    return r;
}

double arq_catch_prob(ChannelParams ch) {
    const double denom = 1.0 - ch.delta * ch.delta_e;
    if (denom <= 0.0) return 0.0;
    return (1.0 - ch.delta_e) / denom;
}

// ---------------------------------------------------------------------------
// standalone phase operations (counting flavour)
// ---------------------------------------------------------------------------

ArqResult run_arq(std::uint64_t packet_count, ChannelParams ch, Rng& rng) {
    ArqResult res;
    if (packet_count == 0) return res;
    if (ch.delta >= 1.0) throw std::invalid_argument("run_arq: delta = 1 never terminates");
    res.eav_flags.resize(packet_count, 0);
    for (std::uint64_t p = 0; p < packet_count; ++p) {
        bool caught = false;
        for (;;) {
            ++res.slots_used;
            const bool legit = rng.flip(1.0 - ch.delta);
            const bool eav = rng.flip(1.0 - ch.delta_e);
            if (eav) caught = true;
            if (legit) break;
        }
        if (caught) {
            res.eav_flags[p] = 1;
            ++res.eav_catches;
        }
    }
    return res;
}

BroadcastResult run_key_sharing_broadcast(std::uint64_t k_target, ChannelParams ch, Rng& rng) {
    BroadcastResult res;
    if (k_target == 0) return res;
    if (ch.delta_e <= 0.0)
        throw std::invalid_argument("run_key_sharing_broadcast: delta_e = 0, target unreachable");
    if (ch.delta >= 1.0) throw std::invalid_argument("run_key_sharing_broadcast: delta = 1");
    while (res.pool.secret_count < k_target) {
        ++res.slots_used;
        const bool legit = rng.flip(1.0 - ch.delta);
        const bool eav = rng.flip(1.0 - ch.delta_e);
        if (legit) {
            ++res.pool.backing_count;
            if (!eav) ++res.pool.secret_count;
        }
    }
    return res;
}

ExpansionResult run_relay_expansion(std::uint64_t backing_count, std::uint64_t send_count,
                                    ChannelParams ch, Rng& rng) {
    ExpansionResult res;
    if (send_count == 0) return res;
    const double used = double(send_count) * (1.0 - ch.delta * ch.delta_e);
    if (used > double(backing_count) + 2.0)
        throw std::invalid_argument(
            "run_relay_expansion: send_count exceeds the expansion bound (infeasible operating point)");
    for (std::uint64_t t = 0; t < send_count; ++t) {
        ++res.slots_used;
        const bool legit = rng.flip(1.0 - ch.delta);
        const bool eav = rng.flip(1.0 - ch.delta_e);
        if (eav) ++res.eav_seen;
        if (legit) {
            ++res.pool.backing_count;
            if (!eav) ++res.pool.secret_count;
        }
    }
    return res;
}

ExpansionResult run_ry_source_phase(std::uint64_t d0_budget, std::uint64_t e_count,
                                    std::uint64_t k3_target, ChannelParams ch, Rng& rng) {
    if (e_count > d0_budget)
        throw std::invalid_argument("run_ry_source_phase: e_count exceeds the randomness budget");
    ExpansionResult res;
    ArqResult arq = run_arq(e_count, ch, rng);
    res.slots_used = arq.slots_used;
    res.pool.backing_count = e_count;  // ARQ delivers everything
    res.pool.secret_count = e_count - arq.eav_catches;
    res.eav_seen = arq.eav_catches;
    if (k3_target > 0) {
        const double rate = (1.0 - ch.delta) * ch.delta_e;
        if (rate <= 0.0)
            throw std::invalid_argument("run_ry_source_phase: key target unreachable on this link");
        const auto send = std::uint64_t(std::ceil(double(k3_target) / rate));
        for (std::uint64_t t = 0; t < send; ++t) {
            ++res.slots_used;
            const bool legit = rng.flip(1.0 - ch.delta);
            const bool eav = rng.flip(1.0 - ch.delta_e);
            if (eav) ++res.eav_seen;
            if (legit) {
                ++res.pool.backing_count;
                if (!eav) ++res.pool.secret_count;
            }
        }
    }
    return res;
}

MessagePhaseResult run_message_phase(std::uint64_t messages, const KeyPool& pool,
                                     ChannelParams ch, Rng& rng, std::uint64_t safety) {
    MessagePhaseResult res;
    if (messages == 0) return res;
    if (ch.delta >= 1.0) throw std::invalid_argument("run_message_phase: delta = 1");
    const double pc = arq_catch_prob(ch);
    for (std::uint64_t i = 0; i < messages; ++i) {
        if (safety > 0 && pc > 0.0 && res.catches + safety > pool.secret_count) break;
        bool caught = false;
        for (;;) {
            ++res.slots_used;
            const bool legit = rng.flip(1.0 - ch.delta);
            const bool eav = rng.flip(1.0 - ch.delta_e);
            if (eav && !caught) {
                caught = true;
                ++res.catches;
            }
            if (legit) break;
        }
        ++res.sent;
    }
    if (res.catches > pool.secret_count) res.exhausted = true;
    return res;
}

// ---------------------------------------------------------------------------
// whole-scheme scheduler
// ---------------------------------------------------------------------------

namespace {

constexpr std::uint64_t kSafety = 8;       // stop margin between pool and catches
constexpr std::uint64_t kDimReserve = 8;   // spare dimensions kept in every expansion

struct Block {
    std::size_t offset = 0;
    std::size_t size = 0;
    std::size_t next = 0;
    bool exhausted() const { return next >= size; }
    std::uint32_t take() { return std::uint32_t(offset + next++); }
};

class Scheduler {
  public:
    Scheduler(const SimConfig& cfg, Transcript* tr) : cfg_(cfg) {
        validate_network(cfg.net);
        if (!(cfg.margin > 0.0 && cfg.margin <= 1.0))
            throw std::invalid_argument("run_scheme: margin must be in (0, 1]");
        check_point();
        if (cfg.mode == SimMode::field) tr_ = tr ? tr : &local_tr_;
        plan();
    }

    SimReport run() {
        switch (cfg_.net.topology) {
            case Topology::y: run_y(); break;
            case Topology::ry: run_ry(); break;
            case Topology::x: run_x(); break;
        }
        return finish();
    }

  private:
    struct Link {
        int idx = 0;
        ChannelParams ch;
        Rng channel{0};
        Rng coeff{0};
        std::uint64_t cursor = 0;
        std::uint64_t key_cap = 0;
        LinkReport rep;
    };

    bool field() const { return cfg_.mode == SimMode::field; }

    void check_point() {
        const auto names = variable_layout(cfg_.net.topology);
        point_.assign(names.size(), 0.0);
        point_[0] = cfg_.operating_point.r1;
        point_[1] = cfg_.operating_point.r2;
        for (std::size_t i = 2; i < names.size(); ++i) {
            bool found = false;
            for (const auto& [name, v] : cfg_.operating_point.aux) {
                if (name == names[i]) {
                    point_[i] = v;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw std::invalid_argument("run_scheme: operating point lacks variable " +
                                            names[i]);
        }
        LinearProgram lp = capacity_lp(cfg_.net, 1.0, 1.0);
        if (!check_feasible(lp, point_, 1e-7))
            throw std::invalid_argument("run_scheme: operating point infeasible for this network");
    }

    double aux(const char* name) const {
        const auto names = variable_layout(cfg_.net.topology);
        for (std::size_t i = 2; i < names.size(); ++i)
            if (names[i] == name) return point_[i];
        return 0.0;
    }

    static std::uint64_t arq_reserve(std::uint64_t crossing, double delta) {
        if (crossing == 0 || delta >= 1.0) return 0;
        const double inv = 1.0 / (1.0 - delta);
        return std::uint64_t(std::ceil(double(crossing) * inv +
                                       4.0 * std::sqrt(double(crossing) * std::max(delta, 0.01)) * inv)) +
               16;
    }

    void plan() {
        const double m = cfg_.margin;
        const std::uint64_t n = cfg_.horizon;
        n1_ = std::uint64_t(std::floor(m * point_[0] * double(n) + 1e-9));
        n2_ = std::uint64_t(std::floor(m * point_[1] * double(n) + 1e-9));

        const auto& net = cfg_.net;
        links_.resize(num_links(net.topology));
        for (std::size_t i = 0; i < links_.size(); ++i) {
            auto& L = links_[i];
            L.idx = int(i);
            L.ch = net.channels[i];
            L.channel = Rng::keyed(cfg_.seed, std::uint32_t(i), 0);
            L.coeff = Rng::keyed(cfg_.seed, std::uint32_t(i), 1);
            L.rep.link = int(i) + 1;
        }
        // planned message load per link bounds the slot reservation
        auto cap = [&](std::size_t link, std::uint64_t crossing) {
            const std::uint64_t res = arq_reserve(crossing, net.channels[link].delta);
            links_[link].key_cap = n > res ? n - res : 0;
        };
        switch (net.topology) {
            case Topology::y:
                cap(0, n1_);
                cap(1, n2_);
                cap(2, n1_ + n2_);
                break;
            case Topology::ry:
                cap(2, n1_ + n2_);
                cap(0, n1_);
                cap(1, n2_);
                break;
            case Topology::x:
                cap(0, n1_);
                cap(1, n2_);
                cap(2, n1_ + n2_);
                cap(3, n1_);
                cap(4, n2_);
                break;
        }
        if (tr_) {
            tr_->topology = net.topology;
            tr_->rows.clear();
            tr_->entries.clear();
            BasisLayout& lay = tr_->layout;
            lay.n1 = n1_;
            lay.n2 = n2_;
            switch (net.topology) {
                case Topology::y:
                case Topology::x:
                    lay.rand1 = links_[0].key_cap;
                    lay.rand2 = links_[1].key_cap;
                    break;
                case Topology::ry:
                    lay.rand1 = std::uint64_t(std::floor(*net.d0 * double(n) + 1e-9));
                    lay.rand2 = 0;
                    break;
            }
            tr_->owed.assign(tr_->num_destinations(), {});
        }
        w1_coords_.resize(n1_);
        for (std::uint64_t i = 0; i < n1_; ++i) w1_coords_[i] = std::uint32_t(i);
        w2_coords_.resize(n2_);
        for (std::uint64_t i = 0; i < n2_; ++i) w2_coords_[i] = std::uint32_t(n1_ + i);
    }

    // ---- plan arithmetic: targets carry sqrt cushions so the enforcement
    // stops (pool safety, dimension reserve, slot caps) rarely bind ----------

    static std::uint64_t cushion(std::uint64_t x) {
        return 2 * kSafety + 4 * std::uint64_t(std::ceil(std::sqrt(double(x) + 1.0)));
    }

    // pool tally a message phase of `crossing` packets wants
    static std::uint64_t pool_need(std::uint64_t crossing, ChannelParams ch) {
        const double pc = arq_catch_prob(ch);
        if (crossing == 0 || pc <= 0.0) return 0;
        const auto c = std::uint64_t(std::ceil(double(crossing) * pc));
        return c + cushion(c);
    }

    // projected emissions needed to distill `pool_t` secret packets
    static std::uint64_t emit_proj(std::uint64_t pool_t, ChannelParams ch) {
        if (pool_t == 0) return 0;
        const double rate = (1.0 - ch.delta) * ch.delta_e;
        if (rate <= 0.0) return 0;
        const auto t = std::uint64_t(std::ceil(double(pool_t) / rate));
        return t + 4 * std::uint64_t(std::ceil(std::sqrt(double(t) + 1.0)));
    }

    // span dimensions those emissions observably consume
    static std::uint64_t obs_proj(std::uint64_t emissions, ChannelParams ch) {
        if (emissions == 0) return 0;
        const auto o =
            std::uint64_t(std::ceil(double(emissions) * (1.0 - ch.delta * ch.delta_e)));
        return o + 4 * std::uint64_t(std::ceil(std::sqrt(double(emissions) + 1.0))) + kDimReserve;
    }

    // split a relay's backing requirement over the feeding links in proportion
    // to the operating point's per-link key rates
    std::pair<std::uint64_t, std::uint64_t> split_backing(std::uint64_t need, double k1,
                                                          double de1, double k2,
                                                          double de2) const {
        if (need == 0) return {0, 0};
        const double s1 = de1 > 0 ? k1 / de1 : 0.0;
        const double s2 = de2 > 0 ? k2 / de2 : 0.0;
        if (s1 + s2 <= 0.0) {
            const std::uint64_t half = need / 2 + 1;
            return {half, half};
        }
        const auto b1 = std::uint64_t(std::ceil(double(need) * s1 / (s1 + s2))) + 1;
        const auto b2 = std::uint64_t(std::ceil(double(need) * s2 / (s1 + s2))) + 1;
        return {b1, b2};
    }

    std::pair<bool, bool> slot(Link& L, std::uint32_t row_id) {
        const bool legit = L.channel.flip(1.0 - L.ch.delta);
        const bool eav = L.channel.flip(1.0 - L.ch.delta_e);
        if (tr_)
            tr_->entries.push_back(
                {std::uint16_t(L.idx), std::uint32_t(L.cursor), row_id, legit, eav});
        ++L.cursor;
        return {legit, eav};
    }

    gf::Row unit_row(std::uint32_t coord) const {
        gf::Row r(tr_->layout.total(), 0);
        r[coord] = 1;
        return r;
    }

    gf::Row combine(std::span<const PacketRef> refs, const gf::Row& coeffs) const {
        gf::Row out(tr_->layout.total(), 0);
        for (std::size_t b = 0; b < refs.size(); ++b) {
            if (coeffs[b] == 0) continue;
            if (refs[b].unit)
                out[refs[b].id] ^= coeffs[b];
            else
                gf::axpy(out, coeffs[b], tr_->rows[refs[b].id]);
        }
        return out;
    }

    // broadcast fresh randomness until the pool tally reaches the target and
    // the backing (relay feed) reaches its own target
    KeyPool broadcast(Link& L, std::uint64_t target, std::uint64_t backing_target, Block& block) {
        KeyPool pool;
        pool.link = L.idx;
        const std::uint64_t start = L.cursor;
        L.rep.key_target += target;
        while (pool.secret_count < target || pool.backing_count < backing_target) {
            if (L.cursor >= L.key_cap || block.exhausted()) {
                L.rep.slot_capped = true;
                break;
            }
            const std::uint32_t coord = block.take();
            std::uint32_t row_id = 0;
            if (tr_) row_id = tr_->add_row(unit_row(coord));
            auto [legit, eav] = slot(L, row_id);
            if (legit) {
                ++pool.backing_count;
                if (tr_) pool.backing.push_back({coord, true});
                if (!eav) {
                    ++pool.secret_count;
                    if (tr_) pool.secret.push_back({coord, true});
                }
            }
        }
        L.rep.key_slots += L.cursor - start;
        L.rep.key_tally += pool.secret_count;
        L.rep.backing += pool.backing_count;
        return pool;
    }

    // forward existing randomness with ARQ (always delivered, may be observed)
    void arq_refs_into(Link& L, KeyPool& pool, std::span<const PacketRef> refs,
                       std::uint64_t count) {
        const std::uint64_t start = L.cursor;
        for (std::uint64_t p = 0; p < count; ++p) {
            if (L.cursor >= L.key_cap) {
                L.rep.slot_capped = true;
                break;
            }
            std::uint32_t row_id = 0;
            PacketRef ref{0, true};
            if (tr_) {
                ref = refs[p];
                row_id = ref.unit ? tr_->add_row(unit_row(ref.id)) : ref.id;
            }
            bool caught = false, delivered = false;
            while (L.cursor < L.key_cap) {
                auto [legit, eav] = slot(L, row_id);
                if (eav) caught = true;
                if (legit) {
                    delivered = true;
                    break;
                }
            }
            if (!delivered) {
                L.rep.slot_capped = true;
                break;
            }
            ++pool.backing_count;
            if (tr_) pool.backing.push_back(ref);
            if (!caught) {
                ++pool.secret_count;
                if (tr_) pool.secret.push_back(ref);
            }
        }
        L.rep.key_slots += L.cursor - start;
        L.rep.key_tally = pool.secret_count;
        L.rep.backing = pool.backing_count;
    }

    // emit combinations of `refs` (spanning span_rank dimensions) until the
    // pool tally reaches `target` and the receiver holds combo_backing_target
    // combinations, keeping kDimReserve spare dimensions unobserved
    void expand_into(Link& L, KeyPool& pool, std::span<const PacketRef> refs,
                     std::uint64_t refs_count, std::uint64_t span_rank, std::uint64_t target,
                     std::uint64_t combo_backing_target = 0) {
        const std::uint64_t start = L.cursor;
        const std::uint64_t observable_cap = span_rank > kDimReserve ? span_rank - kDimReserve : 0;
        const std::uint64_t backing_base = pool.backing_count;
        std::uint64_t emitted = 0, eav_seen = 0, combo_secret = 0;
        const std::uint64_t key = tr_ ? L.coeff.word() : 0;
        while (pool.secret_count < target ||
               pool.backing_count - backing_base < combo_backing_target) {
            if (L.cursor >= L.key_cap) {
                L.rep.slot_capped = true;
                break;
            }
            if (combo_secret + eav_seen + 1 > observable_cap) {
                L.rep.bound_stopped = true;
                break;
            }
            std::uint32_t row_id = 0;
            if (tr_) {
                gf::Row coeffs = expansion_row(refs_count, emitted, key);
                row_id = tr_->add_row(combine(refs.subspan(0, refs_count), coeffs));
            }
            ++emitted;
            auto [legit, eav] = slot(L, row_id);
            if (eav) ++eav_seen;
            if (legit) {
                ++pool.backing_count;
                if (tr_) pool.backing.push_back({row_id, false});
                if (!eav) {
                    ++pool.secret_count;
                    ++combo_secret;
                    if (tr_) pool.secret.push_back({row_id, false});
                }
            }
        }
        L.rep.key_slots += L.cursor - start;
        L.rep.key_tally = pool.secret_count;
        L.rep.backing = pool.backing_count;
    }

    // one-time-pad transmission of message coordinates; returns what arrived
    std::vector<std::uint32_t> messages(Link& L, std::span<const std::uint32_t> coords,
                                        KeyPool& pool) {
        L.rep.messages_assigned += coords.size();
        const std::uint64_t start = L.cursor;
        const double pc = arq_catch_prob(L.ch);
        const std::uint64_t key = tr_ ? L.coeff.word() : 0;
        std::vector<std::uint32_t> sent;
        std::uint64_t catches = 0;
        for (std::size_t i = 0; i < coords.size(); ++i) {
            if (!cfg_.unsafe_raw_keys && pc > 0.0 && catches + kSafety > pool.secret_count) break;
            if (L.cursor >= cfg_.horizon) {
                L.rep.slot_capped = true;
                truncated_ = true;
                break;
            }
            std::uint32_t row_id = 0;
            if (tr_) {
                gf::Row row;
                if (cfg_.unsafe_raw_keys) {
                    if (!pool.backing.empty()) {
                        const PacketRef ref = pool.backing[i % pool.backing.size()];
                        row = ref.unit ? unit_row(ref.id) : tr_->rows[ref.id];
                    } else {
                        row.assign(tr_->layout.total(), 0);
                    }
                } else if (!pool.secret.empty()) {
                    gf::Row coeffs = expansion_row(pool.secret.size(), i, key);
                    row = combine(pool.secret, coeffs);
                } else {
                    row.assign(tr_->layout.total(), 0);
                }
                row[coords[i]] ^= 1;
                row_id = tr_->add_row(std::move(row));
            }
            bool caught = false, delivered = false;
            while (L.cursor < cfg_.horizon) {
                auto [legit, eav] = slot(L, row_id);
                if (eav && !caught) {
                    caught = true;
                    ++catches;
                }
                if (legit) {
                    delivered = true;
                    break;
                }
            }
            if (!delivered) {
                L.rep.slot_capped = true;
                truncated_ = true;
                break;
            }
            sent.push_back(coords[i]);
        }
        L.rep.msg_slots += L.cursor - start;
        L.rep.messages_sent += sent.size();
        L.rep.catches += catches;
        if (catches > pool.secret_count && pc > 0.0) {
            L.rep.exhausted = true;
            exhausted_ = true;
        }
        return sent;
    }

    // proportional merge keeps the two sessions fair on the shared link
    static std::vector<std::uint32_t> interleave(std::span<const std::uint32_t> a,
                                                 std::span<const std::uint32_t> b) {
        std::vector<std::uint32_t> out;
        out.reserve(a.size() + b.size());
        std::size_t i = 0, j = 0;
        while (i < a.size() || j < b.size()) {
            if (j >= b.size())
                out.push_back(a[i++]);
            else if (i >= a.size())
                out.push_back(b[j++]);
            else if ((i + 1) * b.size() <= (j + 1) * a.size())
                out.push_back(a[i++]);
            else
                out.push_back(b[j++]);
        }
        return out;
    }

    static void merge_backing(KeyPool& dst, const KeyPool& a, const KeyPool& b) {
        dst.backing_count = a.backing_count + b.backing_count;
        dst.backing.reserve(a.backing.size() + b.backing.size());
        dst.backing.insert(dst.backing.end(), a.backing.begin(), a.backing.end());
        dst.backing.insert(dst.backing.end(), b.backing.begin(), b.backing.end());
    }

    void split_by_session(std::span<const std::uint32_t> coords, std::vector<std::uint32_t>& s1,
                          std::vector<std::uint32_t>& s2) const {
        for (auto c : coords) (c < n1_ ? s1 : s2).push_back(c);
    }

    void run_y() {
        // project the shared link's appetite to size the leaf key phases
        const std::uint64_t pool3_t = pool_need(n1_ + n2_, links_[2].ch);
        const std::uint64_t b_need = obs_proj(emit_proj(pool3_t, links_[2].ch), links_[2].ch);
        auto [b1, b2] = split_backing(b_need, aux("k1"), links_[0].ch.delta_e, aux("k2"),
                                      links_[1].ch.delta_e);

        Block theta1{tr_ ? tr_->layout.rand1_at(0) : 0, links_[0].key_cap, 0};
        Block theta2{tr_ ? tr_->layout.rand2_at(0) : 0, links_[1].key_cap, 0};
        KeyPool p1 = broadcast(links_[0], pool_need(n1_, links_[0].ch), b1, theta1);
        KeyPool p2 = broadcast(links_[1], pool_need(n2_, links_[1].ch), b2, theta2);
        auto sent1 = messages(links_[0], w1_coords_, p1);
        auto sent2 = messages(links_[1], w2_coords_, p2);

        KeyPool merged;
        merge_backing(merged, p1, p2);
        auto crossing = interleave(sent1, sent2);
        KeyPool p3;
        p3.link = 2;
        const std::uint64_t t3 = pool_need(crossing.size(), links_[2].ch);
        links_[2].rep.key_target = t3;
        if (t3 > 0)
            expand_into(links_[2], p3, merged.backing, merged.backing_count, merged.backing_count,
                        t3);
        auto sent3 = messages(links_[2], crossing, p3);
        std::vector<std::uint32_t> d1, d2;
        split_by_session(sent3, d1, d2);
        delivered1_ = d1.size();
        delivered2_ = d2.size();
        if (tr_) tr_->owed[0] = sent3;
    }

    void run_ry() {
        Link& src = links_[2];
        const std::uint64_t n = cfg_.horizon;
        const std::uint64_t d0_budget =
            std::uint64_t(std::floor(*cfg_.net.d0 * double(n) + 1e-9));
        std::uint64_t e_count =
            std::uint64_t(std::floor(cfg_.margin * aux("e") * double(n) + 1e-9));
        e_count = std::min(e_count, d0_budget);

        // fresh randomness coordinates: [0, e_count) forwarded raw via ARQ,
        // the rest reserved for combination emissions
        std::vector<PacketRef> arq_refs, mix_refs;
        if (tr_) {
            for (std::uint64_t i = 0; i < e_count; ++i)
                arq_refs.push_back({std::uint32_t(tr_->layout.rand1_at(i)), true});
            for (std::uint64_t i = e_count; i < d0_budget; ++i)
                mix_refs.push_back({std::uint32_t(tr_->layout.rand1_at(i)), true});
        }
        const std::uint64_t mix_count = d0_budget - e_count;

        // downstream span appetite: the two relay-to-destination expansions
        // draw on what the relay receives here
        std::uint64_t span_need = 0;
        for (int s = 0; s < 2; ++s) {
            const std::uint64_t pj = pool_need(s == 0 ? n1_ : n2_, links_[s].ch);
            span_need = std::max(span_need, obs_proj(emit_proj(pj, links_[s].ch), links_[s].ch));
        }
        const std::uint64_t combos_need =
            std::min<std::uint64_t>(span_need > e_count ? span_need - e_count : 0, mix_count);

        KeyPool p3;
        p3.link = 2;
        const std::uint64_t t3 = pool_need(n1_ + n2_, src.ch);
        src.rep.key_target = t3;
        arq_refs_into(src, p3, arq_refs, e_count);
        const std::uint64_t arq_backing = p3.backing_count;
        if (p3.secret_count < t3 || combos_need > 0)
            expand_into(src, p3, mix_refs, mix_count, mix_count, t3, combos_need);
        auto crossing = interleave(w1_coords_, w2_coords_);
        auto sent3 = messages(src, crossing, p3);

        std::vector<std::uint32_t> w1_at_m, w2_at_m;
        split_by_session(sent3, w1_at_m, w2_at_m);
        const std::uint64_t combo_backing = p3.backing_count - arq_backing;
        const std::uint64_t span =
            arq_backing + std::min<std::uint64_t>(combo_backing, mix_count);

        for (int s = 0; s < 2; ++s) {
            Link& L = links_[s];
            const auto& owed = s == 0 ? w1_at_m : w2_at_m;
            KeyPool pj;
            pj.link = s;
            const std::uint64_t tj = pool_need(owed.size(), L.ch);
            L.rep.key_target = tj;
            if (tj > 0) expand_into(L, pj, p3.backing, p3.backing_count, span, tj);
            auto sent = messages(L, owed, pj);
            if (s == 0)
                delivered1_ = sent.size();
            else
                delivered2_ = sent.size();
            if (tr_) tr_->owed[s] = sent;
        }
    }

    void run_x() {
        const std::uint64_t n = cfg_.horizon;
        // plan bottom-up: destination links -> middle link span -> leaf backing
        std::uint64_t span2_need = 0;
        for (int s = 0; s < 2; ++s) {
            const std::uint64_t pj = pool_need(s == 0 ? n1_ : n2_, links_[3 + s].ch);
            span2_need =
                std::max(span2_need, obs_proj(emit_proj(pj, links_[3 + s].ch), links_[3 + s].ch));
        }
        const std::uint64_t e_plan =
            std::uint64_t(std::floor(cfg_.margin * aux("e") * double(n) + 1e-9));
        const std::uint64_t pool3_t = pool_need(n1_ + n2_, links_[2].ch);
        const std::uint64_t combos2_proj = span2_need > e_plan ? span2_need - e_plan : 0;
        const std::uint64_t t3_proj =
            std::max(emit_proj(pool3_t, links_[2].ch),
                     combos2_proj == 0
                         ? 0
                         : std::uint64_t(std::ceil(double(combos2_proj) /
                                                   std::max(1.0 - links_[2].ch.delta, 1e-9))) +
                               4 * std::uint64_t(std::ceil(std::sqrt(double(combos2_proj) + 1))));
        const std::uint64_t b_need = obs_proj(t3_proj, links_[2].ch) + e_plan;
        auto [b1, b2] = split_backing(b_need, aux("k1"), links_[0].ch.delta_e, aux("k2"),
                                      links_[1].ch.delta_e);

        Block theta1{tr_ ? tr_->layout.rand1_at(0) : 0, links_[0].key_cap, 0};
        Block theta2{tr_ ? tr_->layout.rand2_at(0) : 0, links_[1].key_cap, 0};
        KeyPool p1 = broadcast(links_[0], pool_need(n1_, links_[0].ch), b1, theta1);
        KeyPool p2 = broadcast(links_[1], pool_need(n2_, links_[1].ch), b2, theta2);
        auto sent1 = messages(links_[0], w1_coords_, p1);
        auto sent2 = messages(links_[1], w2_coords_, p2);

        // middle link: ARQ part of the received randomness plus combinations
        KeyPool m1;
        merge_backing(m1, p1, p2);
        const std::uint64_t e_count = std::min(e_plan, m1.backing_count);
        const std::uint64_t mix_count = m1.backing_count - e_count;

        Link& mid = links_[2];
        KeyPool p3;
        p3.link = 2;
        auto crossing = interleave(sent1, sent2);
        const std::uint64_t t3 = pool_need(crossing.size(), mid.ch);
        const std::uint64_t combos2_need =
            std::min<std::uint64_t>(span2_need > e_count ? span2_need - e_count : 0, mix_count);
        mid.rep.key_target = t3;
        arq_refs_into(mid, p3, m1.backing, e_count);
        const std::uint64_t arq_backing = p3.backing_count;
        if (p3.secret_count < t3 || combos2_need > 0) {
            std::span<const PacketRef> mix_refs;
            if (tr_) mix_refs = std::span<const PacketRef>(m1.backing).subspan(e_count);
            expand_into(mid, p3, mix_refs, mix_count, mix_count, t3, combos2_need);
        }
        auto sent3 = messages(mid, crossing, p3);

        std::vector<std::uint32_t> w1_at_m2, w2_at_m2;
        split_by_session(sent3, w1_at_m2, w2_at_m2);
        const std::uint64_t combo_backing = p3.backing_count - arq_backing;
        const std::uint64_t span =
            arq_backing + std::min<std::uint64_t>(combo_backing, mix_count);

        for (int s = 0; s < 2; ++s) {
            Link& L = links_[3 + s];
            const auto& owed = s == 0 ? w1_at_m2 : w2_at_m2;
            KeyPool pj;
            pj.link = 3 + s;
            const std::uint64_t tj = pool_need(owed.size(), L.ch);
            L.rep.key_target = tj;
            if (tj > 0) expand_into(L, pj, p3.backing, p3.backing_count, span, tj);
            auto sent = messages(L, owed, pj);
            if (s == 0)
                delivered1_ = sent.size();
            else
                delivered2_ = sent.size();
            if (tr_) tr_->owed[s] = sent;
        }
    }

    SimReport finish() {
        SimReport rep;
        rep.horizon = cfg_.horizon;
        rep.seed = cfg_.seed;
        rep.margin = cfg_.margin;
        rep.mode = cfg_.mode;
        rep.delivered1 = delivered1_;
        rep.delivered2 = delivered2_;
        if (cfg_.horizon > 0) {
            rep.rate1 = double(delivered1_) / double(cfg_.horizon);
            rep.rate2 = double(delivered2_) / double(cfg_.horizon);
        } else {
            truncated_ = true;
        }
        rep.truncated = truncated_;
        rep.exhausted = exhausted_;
        for (const auto& L : links_) {
            rep.links.push_back(L.rep);
            rep.slots_used_max = std::max(rep.slots_used_max, L.cursor);
        }
        return rep;
    }

    const SimConfig& cfg_;
    Transcript* tr_ = nullptr;
    Transcript local_tr_;
    std::vector<double> point_;
    std::vector<Link> links_;
    std::uint64_t n1_ = 0, n2_ = 0;
    std::vector<std::uint32_t> w1_coords_, w2_coords_;
    std::uint64_t delivered1_ = 0, delivered2_ = 0;
    bool truncated_ = false, exhausted_ = false;
};

}  // namespace

SimReport run_scheme(const SimConfig& cfg, Transcript* transcript) {
    Scheduler s(cfg, transcript);
    return s.run();
}

SimReport merge_reports(std::span<const SimReport> reports) {
    if (reports.empty()) throw std::invalid_argument("merge_reports: empty input");
    SimReport out = reports.front();
    for (std::size_t i = 1; i < reports.size(); ++i) {
        const SimReport& r = reports[i];
        out.delivered1 += r.delivered1;
        out.delivered2 += r.delivered2;
        out.rate1 += r.rate1;
        out.rate2 += r.rate2;
        out.truncated = out.truncated || r.truncated;
        out.exhausted = out.exhausted || r.exhausted;
        out.slots_used_max = std::max(out.slots_used_max, r.slots_used_max);
        out.trials += r.trials;
        for (std::size_t l = 0; l < out.links.size() && l < r.links.size(); ++l) {
            auto& a = out.links[l];
            const auto& b = r.links[l];
            a.key_slots += b.key_slots;
            a.msg_slots += b.msg_slots;
            a.key_target += b.key_target;
            a.key_tally += b.key_tally;
            a.backing += b.backing;
            a.messages_assigned += b.messages_assigned;
            a.messages_sent += b.messages_sent;
            a.catches += b.catches;
            a.bound_stopped = a.bound_stopped || b.bound_stopped;
            a.slot_capped = a.slot_capped || b.slot_capped;
            a.exhausted = a.exhausted || b.exhausted;
        }
    }
    out.rate1 /= double(reports.size());
    out.rate2 /= double(reports.size());
    return out;
}

}  // namespace seccap
