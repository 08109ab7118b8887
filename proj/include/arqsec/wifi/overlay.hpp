#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <vector>

#include "arqsec/bitword.hpp"
#include "arqsec/channel.hpp"
#include "arqsec/rng.hpp"

namespace arqsec::wifi {

enum class CipherSuite { Wep24, Tkip48, Ccmp48 };

constexpr unsigned v_width(CipherSuite suite)
{
    return suite == CipherSuite::Wep24 ? 24 : 48;
}

const char* suite_name(CipherSuite suite);
CipherSuite parse_suite(const std::string& name);

/// WEP IV / TKIP TSC / CCMP PN. Width always matches the active suite.
using VValue = BitWord;

class InitTimeout : public std::runtime_error {
  public:
    explicit InitTimeout(std::uint64_t trials)
        : std::runtime_error("initialization phase exhausted its budget after " + std::to_string(trials) +
                             " trials"),
          trials_(trials)
    {
    }
    std::uint64_t trials() const { return trials_; }

  private:
    std::uint64_t trials_;
};

struct InitFrame {
    std::uint32_t seq = 0;  // odd from Alice, even from Bob
    VValue random;
};

/// One transmitted initialization frame.
struct InitRecord {
    std::uint64_t slot = 0;
    Party sender;
    InitFrame frame;
    bool delivered = false;
    /// Part of the final V_0 (a value of a pair stored by Alice).
    bool constituent = false;
};

struct InitResult {
    VValue v0_alice;
    VValue v0_bob;
    std::uint64_t trials_used = 0;   // init frames transmitted (m)
    std::uint64_t slots_used = 0;    // two slots per exchange round
    std::vector<InitRecord> transcript;
};

/// Runs the sequenced exchange until Alice has stored n values.
/// Throws InitTimeout if more than trial_budget frames would be needed.
InitResult run_init_phase(unsigned n, CipherSuite suite, const ErasureSource& channel, CounterRng& rng,
                          std::uint64_t trial_budget, std::uint64_t first_slot = 0);

struct MulticastHeader {
    std::uint32_t group = 0;
    std::uint8_t vg_id = 0;
};

struct DataFrame {
    VValue header_v;           // sent in the clear
    VValue encapsulation_tag;  // stands in for ciphertext + ICV: equals the sender's V_e
    std::optional<MulticastHeader> multicast;
};

struct AliceState {
    VValue v0;
    VValue v_e;
    VValue prev_header_v;
    std::uint64_t frame_index = 0;
    /// Header-Vs Bob may still hold as his previous one: the last acknowledged
    /// header and every header sent after it.
    std::vector<VValue> unconfirmed_headers;

    static AliceState initial(const VValue& v0);
};

struct BobState {
    VValue v0;
    VValue v_d;
    VValue prev_header_v;
    std::uint64_t accepted = 0;

    static BobState initial(const VValue& v0);
};

std::pair<DataFrame, AliceState> alice_encapsulate(AliceState state, bool ack_of_previous, CounterRng& rng);

enum class Outcome { Accepted, ReplayDetected, AttackDetected };
const char* outcome_name(Outcome outcome);

struct Decapsulation {
    Outcome outcome = Outcome::AttackDetected;
    int attempt = 0;      // 1 or 2 when accepted, 0 otherwise
    VValue v_d;           // accepted V_d (unset otherwise)
    BobState state;
};

Decapsulation bob_decapsulate(BobState state, const DataFrame& frame);

struct SessionConfig {
    unsigned n = 2;                 // initialization values
    std::uint64_t data_frames = 0;  // N
    CipherSuite suite = CipherSuite::Wep24;
    std::uint64_t init_budget = 1000;
};

struct FrameRecord {
    std::uint64_t index = 0;  // 1-based
    std::uint64_t slot = 0;   // data slot; the ACK uses slot + 1
    VValue header_v;
    VValue v_e;
    bool delivered = false;
    std::optional<Outcome> outcome;  // set when delivered
    int attempt = 0;
    VValue v_d;
    bool ack_delivered = false;  // Q(i)
};

struct SessionLog {
    SessionConfig config;
    InitResult init;
    std::vector<FrameRecord> frames;
};

/// Incremental Alice -> Bob unicast session over one erasure source.
/// Data frame i occupies slot D + 2(i-1), its ACK the next slot.
class UnicastSession {
  public:
    UnicastSession(const SessionConfig& cfg, const ErasureSource& channel, const SeededRng& rng);

    const InitResult& init() const { return init_; }
    bool done() const { return alice_.frame_index >= cfg_.data_frames; }
    FrameRecord step();

    const AliceState& alice() const { return alice_; }
    const BobState& bob() const { return bob_; }

  private:
    SessionConfig cfg_;
    const ErasureSource& channel_;
    CounterRng header_rng_;
    InitResult init_;
    AliceState alice_;
    BobState bob_;
    bool last_ack_ = true;
    std::uint64_t data_start_slot_ = 0;
};

SessionLog run_unicast_session(const SessionConfig& cfg, const ErasureSource& channel, const SeededRng& rng);

/// CSV: slot,direction,frame_kind,header_v,encapsulation_v,delivered,ack_delivered,attempts,outcome
void write_session_csv(std::ostream& out, const SessionLog& log);

}  // namespace arqsec::wifi
