#include "arqsec/wifi/overlay.hpp"

#include <algorithm>
#include <map>
#include <ostream>

namespace arqsec::wifi {

const char* suite_name(CipherSuite suite)
{
    switch (suite) {
    case CipherSuite::Wep24: return "wep";
    case CipherSuite::Tkip48: return "tkip";
    case CipherSuite::Ccmp48: return "ccmp";
    }
    return "?";
}

CipherSuite parse_suite(const std::string& name)
{
    if (name == "wep") return CipherSuite::Wep24;
    if (name == "tkip") return CipherSuite::Tkip48;
    if (name == "ccmp") return CipherSuite::Ccmp48;
    throw ConfigError("unknown cipher suite: " + name);
}

const char* outcome_name(Outcome outcome)
{
    switch (outcome) {
    case Outcome::Accepted: return "accepted";
    case Outcome::ReplayDetected: return "replay_detected";
    case Outcome::AttackDetected: return "attack_detected";
    }
    return "?";
}

InitResult run_init_phase(unsigned n, CipherSuite suite, const ErasureSource& channel, CounterRng& rng,
                          std::uint64_t trial_budget, std::uint64_t first_slot)
{
    if (n < 2 || n % 2 != 0) {
        throw std::invalid_argument("initialization needs an even n >= 2");
    }
    if (trial_budget < n) {
        throw std::invalid_argument("trial budget must be at least n");
    }
    const unsigned width = v_width(suite);
    const LinkId a_to_b(kAlice, kBob);
    const LinkId b_to_a(kBob, kAlice);

    InitResult result;
    result.v0_alice = VValue::zero(width);
    result.v0_bob = VValue::zero(width);

    // Bob keeps only the last value per sequence number (value, transcript index).
    std::map<std::uint32_t, std::pair<VValue, std::size_t>> bob_store;
    std::vector<std::size_t> alice_stored;
    std::uint32_t seq = 1;

    auto transmit = [&](Party sender, std::uint32_t s, std::uint64_t slot, LinkId link) -> std::size_t {
        if (result.trials_used >= trial_budget) {
            throw InitTimeout(result.trials_used);
        }
        ++result.trials_used;
        InitRecord rec;
        rec.slot = slot;
        rec.sender = sender;
        rec.frame = InitFrame{s, VValue(width, rng.bits(width))};
        rec.delivered = !channel.erased(link, slot);
        result.transcript.push_back(rec);
        return result.transcript.size() - 1;
    };

    std::uint64_t round = 0;
    while (alice_stored.size() < n) {
        const std::uint64_t slot = first_slot + 2 * round++;
        const std::size_t a_idx = transmit(kAlice, seq, slot, a_to_b);
        if (!result.transcript[a_idx].delivered) {
            continue;  // Alice times out; same seq, fresh value next round
        }
        bob_store[seq] = {result.transcript[a_idx].frame.random, a_idx};
        const std::size_t b_idx = transmit(kBob, seq + 1, slot + 1, b_to_a);
        bob_store[seq + 1] = {result.transcript[b_idx].frame.random, b_idx};
        if (!result.transcript[b_idx].delivered) {
            continue;
        }
        alice_stored.push_back(a_idx);
        alice_stored.push_back(b_idx);
        seq += 2;
    }
    result.slots_used = 2 * round;

    for (std::size_t idx : alice_stored) {
        result.transcript[idx].constituent = true;
        result.v0_alice ^= result.transcript[idx].frame.random;
    }
    for (std::uint32_t s = 1; s <= n; ++s) {
        result.v0_bob ^= bob_store.at(s).first;
    }
    return result;
}

AliceState AliceState::initial(const VValue& v0)
{
    AliceState s;
    s.v0 = v0;
    s.v_e = v0;
    s.prev_header_v = VValue::zero(v0.width());
    s.unconfirmed_headers = {s.prev_header_v};
    return s;
}

BobState BobState::initial(const VValue& v0)
{
    BobState s;
    s.v0 = v0;
    s.v_d = v0;
    s.prev_header_v = VValue::zero(v0.width());
    return s;
}

std::pair<DataFrame, AliceState> alice_encapsulate(AliceState state, bool ack_of_previous, CounterRng& rng)
{
    const unsigned width = state.v_e.width();
    if (ack_of_previous) {
        state.unconfirmed_headers.assign(1, state.prev_header_v);
    } else if (std::find(state.unconfirmed_headers.begin(), state.unconfirmed_headers.end(),
                         state.prev_header_v) == state.unconfirmed_headers.end()) {
        state.unconfirmed_headers.push_back(state.prev_header_v);
    }

    VValue header;
    do {
        header = VValue(width, rng.bits(width));
    } while (std::find(state.unconfirmed_headers.begin(), state.unconfirmed_headers.end(), header) !=
             state.unconfirmed_headers.end());

    VValue v_e = header ^ state.v_e;
    if (!ack_of_previous) {
        v_e ^= state.prev_header_v;
    }
    state.v_e = v_e;
    state.prev_header_v = header;
    ++state.frame_index;

    DataFrame frame;
    frame.header_v = header;
    frame.encapsulation_tag = v_e;
    return {frame, std::move(state)};
}

Decapsulation bob_decapsulate(BobState state, const DataFrame& frame)
{
    Decapsulation out;
    if (frame.header_v == state.prev_header_v) {
        out.outcome = Outcome::ReplayDetected;
        out.state = std::move(state);
        return out;
    }
    const VValue first = frame.header_v ^ state.v_d;
    const VValue second = first ^ state.prev_header_v;
    if (first == frame.encapsulation_tag) {
        out.attempt = 1;
        out.v_d = first;
    } else if (second == frame.encapsulation_tag) {
        out.attempt = 2;
        out.v_d = second;
    } else {
        out.outcome = Outcome::AttackDetected;
        out.state = std::move(state);
        return out;
    }
    out.outcome = Outcome::Accepted;
    state.v_d = out.v_d;
    state.prev_header_v = frame.header_v;
    ++state.accepted;
    out.state = std::move(state);
    return out;
}

UnicastSession::UnicastSession(const SessionConfig& cfg, const ErasureSource& channel, const SeededRng& rng)
    : cfg_(cfg), channel_(channel), header_rng_(rng.stream(kAlice.code(), Purpose::HeaderV))
{
    CounterRng init_rng = rng.stream(kAlice.code(), Purpose::InitRandom);
    init_ = run_init_phase(cfg.n, cfg.suite, channel, init_rng, cfg.init_budget);
    alice_ = AliceState::initial(init_.v0_alice);
    bob_ = BobState::initial(init_.v0_bob);
    data_start_slot_ = init_.slots_used;
}

FrameRecord UnicastSession::step()
{
    FrameRecord rec;
    rec.index = alice_.frame_index + 1;
    rec.slot = data_start_slot_ + 2 * alice_.frame_index;

    auto [frame, next_alice] = alice_encapsulate(std::move(alice_), last_ack_, header_rng_);
    alice_ = std::move(next_alice);
    rec.header_v = frame.header_v;
    rec.v_e = frame.encapsulation_tag;
    rec.delivered = !channel_.erased(LinkId(kAlice, kBob), rec.slot);
    if (rec.delivered) {
        Decapsulation dec = bob_decapsulate(std::move(bob_), frame);
        bob_ = std::move(dec.state);
        rec.outcome = dec.outcome;
        rec.attempt = dec.attempt;
        rec.v_d = dec.v_d;
        if (dec.outcome == Outcome::Accepted) {
            rec.ack_delivered = !channel_.erased(LinkId(kBob, kAlice), rec.slot + 1);
        }
    }
    last_ack_ = rec.ack_delivered;
    return rec;
}

SessionLog run_unicast_session(const SessionConfig& cfg, const ErasureSource& channel, const SeededRng& rng)
{
    UnicastSession session(cfg, channel, rng);
    SessionLog log;
    log.config = cfg;
    log.init = session.init();
    log.frames.reserve(cfg.data_frames);
    while (!session.done()) {
        log.frames.push_back(session.step());
    }
    return log;
}

void write_session_csv(std::ostream& out, const SessionLog& log)
{
    out << "slot,direction,frame_kind,header_v,encapsulation_v,delivered,ack_delivered,attempts,outcome\n";
    for (const auto& rec : log.init.transcript) {
        const Party rx = rec.sender == kAlice ? kBob : kAlice;
        out << rec.slot << ',' << LinkId(rec.sender, rx).name() << ",init," << rec.frame.random.hex() << ",,"
            << (rec.delivered ? 1 : 0) << ",,," << (rec.constituent ? "constituent" : "discarded") << '\n';
    }
    for (const auto& rec : log.frames) {
        out << rec.slot << ",alice->bob,data," << rec.header_v.hex() << ',' << rec.v_e.hex() << ','
            << (rec.delivered ? 1 : 0) << ',' << (rec.ack_delivered ? 1 : 0) << ',' << rec.attempt << ','
            << (rec.outcome ? outcome_name(*rec.outcome) : "lost") << '\n';
    }
}

}  // namespace arqsec::wifi
