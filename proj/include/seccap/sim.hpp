#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "seccap/lp.hpp"
#include "seccap/network.hpp"
#include "seccap/transcript.hpp"

namespace seccap {

enum class SimMode { counting, field };

// Deterministic uniform stream. Raw engine words are mapped to doubles
// directly so results do not depend on the standard library's distributions.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    static Rng keyed(std::uint64_t master, std::uint32_t link, std::uint32_t tag);
    double uniform() { return double(eng_() >> 11) * 0x1.0p-53; }
    bool flip(double p_success) { return uniform() < p_success; }
    std::uint64_t word() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

// Per-packet eavesdropper catch probability under ARQ: (1-dE)/(1-d dE).
double arq_catch_prob(ChannelParams ch);

// A packet in a key pool: either a fresh basis coordinate (unit = true, id is
// the coordinate) or a tracked transcript row.
struct PacketRef {
    std::uint32_t id = 0;
    bool unit = true;
};

struct KeyPool {
    int link = -1;
    std::uint64_t secret_count = 0;   // received by the legitimate node, missed by the eavesdropper
    std::uint64_t backing_count = 0;  // received by the legitimate node
    std::vector<PacketRef> secret;    // field mode only
    std::vector<PacketRef> backing;   // field mode only
};

// ---- standalone phase operations (counting flavour) ------------------------
// These expose the protocol building blocks with their expectation contracts;
// run_scheme drives the same slot loop with coefficient tracking on top.

struct ArqResult {
    std::uint64_t slots_used = 0;
    std::uint64_t eav_catches = 0;
    std::vector<std::uint8_t> eav_flags;  // one per packet
};

// Retransmit each packet until the legitimate node has it. Rejects delta = 1.
// E[slots] = count/(1-d); E[catch fraction] = (1-dE)/(1-d dE).
ArqResult run_arq(std::uint64_t packet_count, ChannelParams ch, Rng& rng);

struct BroadcastResult {
    KeyPool pool;
    std::uint64_t slots_used = 0;
};

// Fresh random packets without retransmission until k_target of them have been
// received by the legitimate node and missed by the eavesdropper. Rejects
// delta_e = 0 (target unreachable) and delta = 1. E[slots] = k/((1-d) dE).
BroadcastResult run_key_sharing_broadcast(std::uint64_t k_target, ChannelParams ch, Rng& rng);

struct ExpansionResult {
    KeyPool pool;
    std::uint64_t slots_used = 0;
    std::uint64_t eav_seen = 0;
};

// Exactly send_count fresh combinations of a backing pool, no retransmission.
// Rejects send_count > backing/(1-d dE) + rounding slack (the expansion bound).
ExpansionResult run_relay_expansion(std::uint64_t backing_count, std::uint64_t send_count,
                                    ChannelParams ch, Rng& rng);

// The rate-limited source phase: e_count packets via ARQ, then
// ceil(k3_target/((1-d) dE)) combinations of the remaining budget.
// Rejects e_count > d0_budget.
ExpansionResult run_ry_source_phase(std::uint64_t d0_budget, std::uint64_t e_count,
                                    std::uint64_t k3_target, ChannelParams ch, Rng& rng);

struct MessagePhaseResult {
    std::uint64_t slots_used = 0;
    std::uint64_t sent = 0;
    std::uint64_t catches = 0;  // key consumed
    bool exhausted = false;     // catches exceeded the pool
};

// One-time-pad message transmissions under ARQ against the given pool.
// With safety > 0 the phase stops early instead of outrunning the pool.
MessagePhaseResult run_message_phase(std::uint64_t messages, const KeyPool& pool,
                                     ChannelParams ch, Rng& rng, std::uint64_t safety = 0);

// ---- whole-scheme simulation ------------------------------------------------

struct SimConfig {
    NetworkModel net;
    RegionPoint operating_point;  // LP vertex: rates plus auxiliaries by name
    std::uint64_t horizon = 100000;  // slot budget per link
    std::uint64_t seed = 0;
    double margin = 0.95;  // in (0,1]; rates are scaled by this before the run
    SimMode mode = SimMode::counting;
    bool unsafe_raw_keys = false;  // soundness probe: raw pool packets as pads
};

struct LinkReport {
    int link = 0;  // 1-based
    std::uint64_t key_slots = 0, msg_slots = 0;
    std::uint64_t key_target = 0, key_tally = 0, backing = 0;
    std::uint64_t messages_assigned = 0, messages_sent = 0;
    std::uint64_t catches = 0;  // key consumed by the eavesdropper hypothesis
    bool bound_stopped = false, slot_capped = false, exhausted = false;
};

struct SimReport {
    std::vector<LinkReport> links;
    std::uint64_t delivered1 = 0, delivered2 = 0;
    double rate1 = 0.0, rate2 = 0.0;  // delivered / horizon
    std::uint64_t slots_used_max = 0;
    bool truncated = false;
    bool exhausted = false;
    std::uint64_t horizon = 0, seed = 0;
    double margin = 1.0;
    SimMode mode = SimMode::counting;
    std::uint32_t trials = 1;

    double sum_rate() const { return rate1 + rate2; }
};

// Runs the two-phase scheme end to end. In field mode, pass a Transcript to
// receive the coefficient record for check_secrecy / check_decodability.
// Throws std::invalid_argument on bad config or an infeasible operating point.
SimReport run_scheme(const SimConfig& cfg, Transcript* transcript = nullptr);

// Aggregates independent trials: counts add, rates average, flags combine.
SimReport merge_reports(std::span<const SimReport> reports);

}  // namespace seccap
