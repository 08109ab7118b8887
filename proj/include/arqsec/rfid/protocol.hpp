#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "arqsec/bitword.hpp"
#include "arqsec/channel.hpp"
#include "arqsec/rng.hpp"

namespace arqsec::rfid {

/// The ARQ stage ended with no acknowledged frame, so k' would be all zero.
class DegenerateKey : public std::runtime_error {
  public:
    DegenerateKey() : std::runtime_error("no acknowledged ARQ frame; distilled key would be zero") {}
};

/// Msg1 matched no stored IDS under any key hypothesis.
class UnknownTag : public std::runtime_error {
  public:
    UnknownTag() : std::runtime_error("no IDS match under any hypothesis") {}
};

/// k = k1 || k2 || k3 || k4 || k5, each l bits.
class KeyBundle {
  public:
    KeyBundle() = default;
    explicit KeyBundle(const std::array<BitWord, 5>& parts);

    static KeyBundle zero(unsigned ell);
    static KeyBundle random(unsigned ell, CounterRng& rng);

    unsigned ell() const { return parts_[0].width(); }
    /// 1-based component access: k(1) .. k(5).
    const BitWord& operator()(unsigned i) const { return parts_.at(i - 1); }
    const std::array<BitWord, 5>& parts() const { return parts_; }

    KeyBundle operator^(const KeyBundle& other) const;
    KeyBundle& operator^=(const KeyBundle& other);
    bool operator==(const KeyBundle&) const = default;
    bool is_zero() const;

    /// k1..k5 hex, concatenated.
    std::string hex() const;

  private:
    std::array<BitWord, 5> parts_;
};

struct ArqFrame {
    std::uint32_t seq = 0;  // repeats until acknowledged
    bool seq_bit = false;   // the one bit actually sent: seq mod 2
    KeyBundle random;       // 5l random bits
};

/// 5l payload bits plus the sequence bit.
constexpr unsigned arq_frame_bits(unsigned ell) { return 5 * ell + 1; }

/// Tag-side ARQ buffer: frames of confirmed sequence numbers folded together,
/// plus the latest frame of the newest sequence number.
struct TagArqBuffer {
    KeyBundle confirmed;
    std::optional<KeyBundle> last;
    bool last_bit = false;

    void reset(unsigned ell);
    /// Returns true (the tag ACKs every frame it receives).
    bool receive(const ArqFrame& frame);
    /// The tag includes its newest frame optimistically.
    KeyBundle key() const;
};

struct ArqRecord {
    std::uint64_t slot = 0;  // the ACK shares the slot (same fading realization)
    ArqFrame frame;
    bool delivered = false;
    bool ack_delivered = false;
};

struct ArqResult {
    KeyBundle k_prime_reader;
    KeyBundle k_prime_tag;
    std::vector<std::size_t> acked;        // indices into records: the set A
    std::vector<KeyBundle> trailing;       // frames after the last ACK, oldest first
    std::vector<ArqRecord> records;
    std::uint64_t rng_draws = 0;
};

/// Reader -> tag frames on reader->tag, ACK bits on tag->reader. Sends
/// `frames` transmissions (default m) and never throws.
ArqResult arq_exchange(unsigned m, unsigned ell, const ErasureSource& channel, CounterRng& reader_rng,
                       TagArqBuffer& tag, std::uint64_t first_slot = 0,
                       std::optional<unsigned> frames = std::nullopt);

/// Complete ARQ stage from a fresh tag buffer; throws DegenerateKey when A is empty.
ArqResult run_arq_stage(unsigned m, unsigned ell, const ErasureSource& channel, CounterRng& reader_rng,
                        std::uint64_t first_slot = 0);

/// Reader-side key candidates for the tag's k': own k' first, then
/// k' xor each trailing frame, newest first.
std::vector<KeyBundle> key_hypotheses(const ArqResult& arq);

struct Msg1 {
    BitWord masked_ids;  // IDS ^ k'1
    BitWord masked_nt;   // N_T ^ k'2
};

struct Msg2 {
    BitWord masked_nr;  // N_R ^ k2 ^ k'4
    BitWord m1;         // f_{k1 ^ k'3}(N_T || N_R)
};

struct Msg3 {
    BitWord masked_id;  // ID ^ k5 ^ k'5
    BitWord m2;         // f_{k4 ^ k'5}(ID || N_R)
};

struct Provision {
    unsigned ell = 10;
    BitWord id;
    BitWord ids;
    KeyBundle k;

    static Provision random(unsigned ell, CounterRng& rng);
};

Provision provision_from_json(const nlohmann::json& j);
nlohmann::json provision_to_json(const Provision& p);

enum class TagPhase { Idle, Arq, AwaitMsg2, Done };

struct TagState {
    unsigned ell = 10;
    BitWord id;  // never changes
    BitWord ids;
    KeyBundle k;
    KeyBundle k_prime;
    BitWord n_t;
    BitWord n_r;
    TagPhase phase = TagPhase::Idle;
    TagArqBuffer arq;  // receive buffer, not part of the working-memory tally

    static TagState from_provision(const Provision& p);
    /// IDS + ID + k + k' + N_T + N_R.
    unsigned memory_bits() const;
};

struct TagRecord {
    BitWord ids;
    KeyBundle k;
    bool operator==(const TagRecord&) const = default;
};

enum class Generation { Current, Old };

struct ReaderEntry {
    BitWord id;
    TagRecord current;
    std::optional<TagRecord> old;
};

struct ReaderState {
    unsigned ell = 10;
    std::vector<ReaderEntry> entries;

    explicit ReaderState(unsigned ell_bits = 10) : ell(ell_bits) {}
    std::size_t enroll(const Provision& p);
    const ReaderEntry* find_id(const BitWord& id) const;
};

/// What the reader keeps between Msg1 and Msg3 of one run.
struct ReaderSession {
    ArqResult arq;
    std::size_t entry = 0;
    Generation generation = Generation::Current;
    int hypothesis = 0;  // 1-based index into key_hypotheses
    KeyBundle k_prime;   // resolved
    TagRecord used;      // record the tag was found under (pre-update)
    BitWord n_t;
    BitWord n_r;
};

struct OverheadCounters {
    unsigned rng_reader = 0;
    unsigned rng_tag = 0;
    unsigned prf_reader = 0;
    unsigned prf_tag = 0;
    unsigned steps = 0;
    unsigned tag_memory_bits = 0;
    bool operator==(const OverheadCounters&) const = default;
};

Msg1 tag_hello(TagState& tag, CounterRng& rng, OverheadCounters& c);

/// Looks the tag up, draws N_R, emits Msg2 and updates the reader's records.
/// Throws UnknownTag.
Msg2 reader_respond(ReaderState& reader, ReaderSession& session, const Msg1& msg1, CounterRng& rng,
                    OverheadCounters& c);

bool tag_verify_reader(TagState& tag, const Msg2& msg2, OverheadCounters& c);

/// Emits Msg3, then updates IDS and k and clears k', N_T and N_R.
Msg3 tag_prove(TagState& tag, OverheadCounters& c);

enum class TagVerdict { Accept, AcceptProvisionalOldKeys, Abort };

TagVerdict reader_verify_tag(const ReaderState& reader, const ReaderSession& session, const Msg3& msg3,
                             OverheadCounters& c);

enum class RunOutcome { MutualSuccess, ProvisionalSuccess, Abort };
enum class AbortStage { None, DegenerateKey, Interrupted, UnknownTag, ReaderAuth, TagAuth };

const char* run_outcome_name(RunOutcome o);
const char* abort_stage_name(AbortStage s);

struct TranscriptRow {
    unsigned step = 0;
    std::string sender;
    std::string message_kind;  // arq_frame, ack, msg1, msg2, msg3
    std::string payload;       // hex
    bool delivered = false;
    int hypothesis_used = 0;  // msg1 only; 0 if unresolved
};

struct ProtocolRun {
    RunOutcome outcome = RunOutcome::Abort;
    AbortStage stage = AbortStage::None;
    OverheadCounters counters;
    ArqResult arq;
    std::optional<Msg1> msg1;
    std::optional<Msg2> msg2;
    std::optional<Msg3> msg3;
    std::vector<TranscriptRow> transcript;
};

struct RunOptions {
    std::uint64_t first_slot = 0;
    /// Stop after this step (1..m+3); later messages are never delivered.
    std::optional<unsigned> interrupt_after;
};

/// One protocol round. Slots: ARQ frames at first_slot .. +m-1, then Msg1,
/// Msg2 and Msg3 in the next three slots.
ProtocolRun run_protocol(ReaderState& reader, TagState& tag, unsigned m, const ErasureSource& channel,
                         CounterRng& reader_rng, CounterRng& tag_rng, const RunOptions& options = {});

/// Fresh random provisioning, one tag, one round.
ProtocolRun run_protocol(unsigned m, unsigned ell, const ErasureSource& channel, std::uint64_t seed);

struct RecoveryResult {
    bool authenticated = false;
    unsigned rounds = 0;
    std::vector<RunOutcome> outcomes;
};

/// Repeats rounds until one ends in MutualSuccess or max_rounds are used.
/// A provisional (old-key) round never completes authentication on its own.
RecoveryResult authenticate_with_recovery(ReaderState& reader, TagState& tag, unsigned m,
                                          const ErasureSource& channel, CounterRng& reader_rng,
                                          CounterRng& tag_rng, unsigned max_rounds, std::uint64_t& slot);

struct PastTranscript {
    Msg1 msg1;
    Msg2 msg2;
    Msg3 msg3;
};

struct ProbeResult {
    bool ids_linked = false;
    bool id_unmasked = false;
    bool m1_recomputed = false;
    bool m2_recomputed = false;
    bool any() const { return ids_linked || id_unmasked || m1_recomputed || m2_recomputed; }
};

/// Tries to unmask / recompute a past transcript with the given state.
ProbeResult probe_transcript(const PastTranscript& past, const BitWord& ids, const KeyBundle& k,
                             const KeyBundle& k_prime, const BitWord& id);

/// CSV: step,sender,message_kind,payload,delivered,hypothesis_used
void write_transcript_csv(std::ostream& out, const std::vector<TranscriptRow>& rows);

}  // namespace arqsec::rfid
