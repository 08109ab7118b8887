#include "arqsec/rfid/protocol.hpp"

#include <algorithm>
#include <ostream>

#include "arqsec/rfid/prf.hpp"

namespace arqsec::rfid {

KeyBundle::KeyBundle(const std::array<BitWord, 5>& parts) : parts_(parts)
{
    for (const auto& p : parts_) {
        if (p.width() != parts_[0].width()) {
            throw std::invalid_argument("key components must share one width");
        }
    }
}

KeyBundle KeyBundle::zero(unsigned ell)
{
    const BitWord z = BitWord::zero(ell);
    return KeyBundle({z, z, z, z, z});
}

KeyBundle KeyBundle::random(unsigned ell, CounterRng& rng)
{
    std::array<BitWord, 5> parts;
    for (auto& p : parts) {
        p = BitWord(ell, rng.bits(ell));
    }
    return KeyBundle(parts);
}

KeyBundle KeyBundle::operator^(const KeyBundle& other) const
{
    KeyBundle out = *this;
    out ^= other;
    return out;
}

KeyBundle& KeyBundle::operator^=(const KeyBundle& other)
{
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        parts_[i] ^= other.parts_[i];
    }
    return *this;
}

bool KeyBundle::is_zero() const
{
    return std::all_of(parts_.begin(), parts_.end(), [](const BitWord& p) { return p.is_zero(); });
}

std::string KeyBundle::hex() const
{
    std::string out;
    for (const auto& p : parts_) {
        out += p.hex();
    }
    return out;
}

void TagArqBuffer::reset(unsigned ell)
{
    confirmed = KeyBundle::zero(ell);
    last.reset();
    last_bit = false;
}

bool TagArqBuffer::receive(const ArqFrame& frame)
{
    if (!last || frame.seq_bit != last_bit) {
        if (last) {
            confirmed ^= *last;
        }
        last_bit = frame.seq_bit;
    }
    last = frame.random;
    return true;
}

KeyBundle TagArqBuffer::key() const
{
    return last ? confirmed ^ *last : confirmed;
}

ArqResult arq_exchange(unsigned m, unsigned ell, const ErasureSource& channel, CounterRng& reader_rng,
                       TagArqBuffer& tag, std::uint64_t first_slot, std::optional<unsigned> frames)
{
    const LinkId down(kReader, kTag);
    const LinkId up(kTag, kReader);
    const unsigned count = frames ? std::min(*frames, m) : m;

    ArqResult r;
    r.k_prime_reader = KeyBundle::zero(ell);
    r.records.reserve(count);
    std::uint32_t seq = 1;
    for (unsigned j = 0; j < count; ++j) {
        ArqRecord rec;
        rec.slot = first_slot + j;
        rec.frame = ArqFrame{seq, (seq & 1U) != 0, KeyBundle::random(ell, reader_rng)};
        ++r.rng_draws;
        rec.delivered = !channel.erased(down, rec.slot);
        const bool acked = rec.delivered && tag.receive(rec.frame);
        rec.ack_delivered = acked && !channel.erased(up, rec.slot);
        if (rec.ack_delivered) {
            r.k_prime_reader ^= rec.frame.random;
            r.acked.push_back(r.records.size());
            r.trailing.clear();
            ++seq;
        } else {
            r.trailing.push_back(rec.frame.random);
        }
        r.records.push_back(rec);
    }
    r.k_prime_tag = tag.key();
    return r;
}

ArqResult run_arq_stage(unsigned m, unsigned ell, const ErasureSource& channel, CounterRng& reader_rng,
                        std::uint64_t first_slot)
{
    if (m < 1) {
        throw std::invalid_argument("ARQ stage needs m >= 1");
    }
    TagArqBuffer tag;
    tag.reset(ell);
    ArqResult r = arq_exchange(m, ell, channel, reader_rng, tag, first_slot);
    if (r.acked.empty()) {
        throw DegenerateKey();
    }
    return r;
}

std::vector<KeyBundle> key_hypotheses(const ArqResult& arq)
{
    std::vector<KeyBundle> out{arq.k_prime_reader};
    for (auto it = arq.trailing.rbegin(); it != arq.trailing.rend(); ++it) {
        out.push_back(arq.k_prime_reader ^ *it);
    }
    return out;
}

Provision Provision::random(unsigned ell, CounterRng& rng)
{
    Provision p;
    p.ell = ell;
    p.id = BitWord(ell, rng.bits(ell));
    p.ids = BitWord(ell, rng.bits(ell));
    p.k = KeyBundle::random(ell, rng);
    return p;
}

Provision provision_from_json(const nlohmann::json& j)
{
    try {
        Provision p;
        p.ell = j.at("ell").get<unsigned>();
        if (p.ell < 1 || p.ell > 32) {
            throw ConfigError("ell must be in [1, 32]");
        }
        p.id = BitWord::from_hex(p.ell, j.at("id").get<std::string>());
        p.ids = BitWord::from_hex(p.ell, j.at("ids").get<std::string>());
        const auto& k = j.at("k");
        if (!k.is_array() || k.size() != 5) {
            throw ConfigError("\"k\" must hold five hex words");
        }
        std::array<BitWord, 5> parts;
        for (std::size_t i = 0; i < 5; ++i) {
            parts[i] = BitWord::from_hex(p.ell, k[i].get<std::string>());
        }
        p.k = KeyBundle(parts);
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bad provisioning file: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("bad provisioning file: ") + e.what());
    }
}

nlohmann::json provision_to_json(const Provision& p)
{
    nlohmann::json k = nlohmann::json::array();
    for (const auto& part : p.k.parts()) {
        k.push_back(part.hex());
    }
    return {{"id", p.id.hex()}, {"ids", p.ids.hex()}, {"k", k}, {"ell", p.ell}};
}

TagState TagState::from_provision(const Provision& p)
{
    TagState t;
    t.ell = p.ell;
    t.id = p.id;
    t.ids = p.ids;
    t.k = p.k;
    t.k_prime = KeyBundle::zero(p.ell);
    t.n_t = BitWord::zero(p.ell);
    t.n_r = BitWord::zero(p.ell);
    t.arq.reset(p.ell);
    return t;
}

unsigned TagState::memory_bits() const
{
    return ids.width() + id.width() + 5 * k.ell() + 5 * k_prime.ell() + n_t.width() + n_r.width();
}

std::size_t ReaderState::enroll(const Provision& p)
{
    if (p.ell != ell) {
        throw ConfigError("tag component length does not match the reader");
    }
    for (const auto& e : entries) {
        if (e.id == p.id) {
            throw ConfigError("duplicate tag ID " + p.id.hex());
        }
        if (e.current.ids == p.ids || (e.old && e.old->ids == p.ids)) {
            throw ConfigError("IDS " + p.ids.hex() + " already in use");
        }
    }
    entries.push_back(ReaderEntry{p.id, TagRecord{p.ids, p.k}, std::nullopt});
    return entries.size() - 1;
}

const ReaderEntry* ReaderState::find_id(const BitWord& id) const
{
    for (const auto& e : entries) {
        if (e.id == id) {
            return &e;
        }
    }
    return nullptr;
}

Msg1 tag_hello(TagState& tag, CounterRng& rng, OverheadCounters& c)
{
    tag.n_t = BitWord(tag.ell, rng.bits(tag.ell));
    ++c.rng_tag;
    tag.phase = TagPhase::AwaitMsg2;
    return Msg1{tag.ids ^ tag.k_prime(1), tag.n_t ^ tag.k_prime(2)};
}

namespace {

const TagRecord* record_of(const ReaderEntry& e, Generation g)
{
    if (g == Generation::Current) {
        return &e.current;
    }
    return e.old ? &*e.old : nullptr;
}

/// One draw picks N_R uniformly among values whose new IDS collides with no
/// IDS in the database.
BitWord draw_fresh_nonce(const ReaderState& reader, const TagRecord& rec, CounterRng& rng)
{
    const BitWord base = rec.ids ^ rec.k(3);
    std::vector<std::uint64_t> excluded;
    for (const auto& e : reader.entries) {
        excluded.push_back((e.current.ids ^ base).value());
        if (e.old) {
            excluded.push_back((e.old->ids ^ base).value());
        }
    }
    std::sort(excluded.begin(), excluded.end());
    excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
    const std::uint64_t space = std::uint64_t{1} << reader.ell;
    if (excluded.size() >= space) {
        throw std::runtime_error("IDS space exhausted");
    }
    std::uint64_t r = rng.below(space - excluded.size());
    for (std::uint64_t e : excluded) {
        if (e <= r) {
            ++r;
        } else {
            break;
        }
    }
    return BitWord(reader.ell, r);
}

}  // namespace

Msg2 reader_respond(ReaderState& reader, ReaderSession& session, const Msg1& msg1, CounterRng& rng,
                    OverheadCounters& c)
{
    const auto hyps = key_hypotheses(session.arq);
    for (Generation g : {Generation::Current, Generation::Old}) {
        for (std::size_t h = 0; h < hyps.size(); ++h) {
            const BitWord ids = msg1.masked_ids ^ hyps[h](1);
            for (std::size_t i = 0; i < reader.entries.size(); ++i) {
                const TagRecord* rec = record_of(reader.entries[i], g);
                if (rec == nullptr || rec->ids != ids) {
                    continue;
                }
                const KeyBundle& kp = hyps[h];
                session.entry = i;
                session.generation = g;
                session.hypothesis = static_cast<int>(h) + 1;
                session.k_prime = kp;
                session.used = *rec;
                session.n_t = msg1.masked_nt ^ kp(2);
                session.n_r = draw_fresh_nonce(reader, *rec, rng);
                ++c.rng_reader;

                const BitWord m1 = prf_eval(rec->k(1) ^ kp(3), session.n_t.concat(session.n_r));
                ++c.prf_reader;
                const Msg2 msg2{session.n_r ^ rec->k(2) ^ kp(4), m1};

                TagRecord fresh{rec->ids ^ rec->k(3) ^ session.n_r, rec->k ^ kp};
                ReaderEntry& entry = reader.entries[i];
                if (g == Generation::Current) {
                    entry.old = entry.current;
                }
                entry.current = fresh;
                return msg2;
            }
        }
    }
    throw UnknownTag();
}

bool tag_verify_reader(TagState& tag, const Msg2& msg2, OverheadCounters& c)
{
    tag.n_r = msg2.masked_nr ^ tag.k(2) ^ tag.k_prime(4);
    const BitWord m1 = prf_eval(tag.k(1) ^ tag.k_prime(3), tag.n_t.concat(tag.n_r));
    ++c.prf_tag;
    return m1 == msg2.m1;
}

Msg3 tag_prove(TagState& tag, OverheadCounters& c)
{
    const BitWord m2 = prf_eval(tag.k(4) ^ tag.k_prime(5), tag.id.concat(tag.n_r));
    ++c.prf_tag;
    const Msg3 msg3{tag.id ^ tag.k(5) ^ tag.k_prime(5), m2};

    tag.ids ^= tag.k(3) ^ tag.n_r;
    tag.k ^= tag.k_prime;
    tag.k_prime = KeyBundle::zero(tag.ell);
    tag.n_t = BitWord::zero(tag.ell);
    tag.n_r = BitWord::zero(tag.ell);
    tag.phase = TagPhase::Done;
    return msg3;
}

TagVerdict reader_verify_tag(const ReaderState& reader, const ReaderSession& session, const Msg3& msg3,
                             OverheadCounters& c)
{
    const BitWord& id = reader.entries.at(session.entry).id;
    const KeyBundle& k = session.used.k;
    const KeyBundle& kp = session.k_prime;
    const BitWord m2 = prf_eval(k(4) ^ kp(5), id.concat(session.n_r));
    ++c.prf_reader;
    if ((msg3.masked_id ^ k(5) ^ kp(5)) != id || m2 != msg3.m2) {
        return TagVerdict::Abort;
    }
    return session.generation == Generation::Current ? TagVerdict::Accept : TagVerdict::AcceptProvisionalOldKeys;
}

const char* run_outcome_name(RunOutcome o)
{
    switch (o) {
    case RunOutcome::MutualSuccess: return "mutual_success";
    case RunOutcome::ProvisionalSuccess: return "provisional_success";
    case RunOutcome::Abort: return "abort";
    }
    return "?";
}

const char* abort_stage_name(AbortStage s)
{
    switch (s) {
    case AbortStage::None: return "none";
    case AbortStage::DegenerateKey: return "degenerate_key";
    case AbortStage::Interrupted: return "interrupted";
    case AbortStage::UnknownTag: return "unknown_tag";
    case AbortStage::ReaderAuth: return "reader_auth";
    case AbortStage::TagAuth: return "tag_auth";
    }
    return "?";
}

ProtocolRun run_protocol(ReaderState& reader, TagState& tag, unsigned m, const ErasureSource& channel,
                         CounterRng& reader_rng, CounterRng& tag_rng, const RunOptions& options)
{
    if (m < 1) {
        throw std::invalid_argument("ARQ stage needs m >= 1");
    }
    ProtocolRun run;
    OverheadCounters& c = run.counters;
    c.tag_memory_bits = tag.memory_bits();
    const unsigned stop = options.interrupt_after.value_or(~0U);
    const std::uint64_t s0 = options.first_slot;
    const LinkId down(kReader, kTag);
    const LinkId up(kTag, kReader);

    auto abort = [&run](AbortStage stage) {
        run.outcome = RunOutcome::Abort;
        run.stage = stage;
        return run;
    };
    auto sent = [&](unsigned step, const char* sender, const char* kind, std::string payload, bool delivered,
                    int hyp = 0) {
        run.transcript.push_back(TranscriptRow{step, sender, kind, std::move(payload), delivered, hyp});
    };

    tag.arq.reset(tag.ell);
    tag.k_prime = KeyBundle::zero(tag.ell);
    tag.n_t = BitWord::zero(tag.ell);
    tag.n_r = BitWord::zero(tag.ell);
    tag.phase = TagPhase::Arq;

    run.arq = arq_exchange(m, tag.ell, channel, reader_rng, tag.arq, s0, std::min(stop, m));
    c.rng_reader += static_cast<unsigned>(run.arq.rng_draws);
    for (const auto& rec : run.arq.records) {
        const unsigned step = ++c.steps;
        sent(step, "reader", "arq_frame", std::string(rec.frame.seq_bit ? "1:" : "0:") + rec.frame.random.hex(),
             rec.delivered);
        if (rec.delivered) {
            sent(step, "tag", "ack", "1", rec.ack_delivered);
        }
    }
    if (stop <= m) {
        return abort(AbortStage::Interrupted);
    }
    if (run.arq.acked.empty()) {
        return abort(AbortStage::DegenerateKey);
    }
    tag.k_prime = tag.arq.key();

    run.msg1 = tag_hello(tag, tag_rng, c);
    ++c.steps;
    const bool msg1_ok = stop > m + 1 && !channel.erased(up, s0 + m);
    ReaderSession session;
    session.arq = run.arq;
    if (!msg1_ok) {
        sent(c.steps, "tag", "msg1", run.msg1->masked_ids.hex() + run.msg1->masked_nt.hex(), false);
        return abort(AbortStage::Interrupted);
    }
    try {
        run.msg2 = reader_respond(reader, session, *run.msg1, reader_rng, c);
    } catch (const UnknownTag&) {
        sent(c.steps, "tag", "msg1", run.msg1->masked_ids.hex() + run.msg1->masked_nt.hex(), true);
        return abort(AbortStage::UnknownTag);
    }
    sent(c.steps, "tag", "msg1", run.msg1->masked_ids.hex() + run.msg1->masked_nt.hex(), true, session.hypothesis);

    ++c.steps;
    const bool msg2_ok = stop > m + 2 && !channel.erased(down, s0 + m + 1);
    sent(c.steps, "reader", "msg2", run.msg2->masked_nr.hex() + run.msg2->m1.hex(), msg2_ok);
    if (!msg2_ok) {
        return abort(AbortStage::Interrupted);
    }
    if (!tag_verify_reader(tag, *run.msg2, c)) {
        return abort(AbortStage::ReaderAuth);
    }

    run.msg3 = tag_prove(tag, c);
    ++c.steps;
    const bool msg3_ok = stop > m + 3 && !channel.erased(up, s0 + m + 2);
    sent(c.steps, "tag", "msg3", run.msg3->masked_id.hex() + run.msg3->m2.hex(), msg3_ok);
    if (!msg3_ok) {
        return abort(AbortStage::Interrupted);
    }
    switch (reader_verify_tag(reader, session, *run.msg3, c)) {
    case TagVerdict::Accept: run.outcome = RunOutcome::MutualSuccess; break;
    case TagVerdict::AcceptProvisionalOldKeys: run.outcome = RunOutcome::ProvisionalSuccess; break;
    case TagVerdict::Abort: return abort(AbortStage::TagAuth);
    }
    return run;
}

ProtocolRun run_protocol(unsigned m, unsigned ell, const ErasureSource& channel, std::uint64_t seed)
{
    const SeededRng rng(seed);
    CounterRng prov_rng = rng.stream(kTag.code(), Purpose::Provisioning);
    const Provision p = Provision::random(ell, prov_rng);
    ReaderState reader(ell);
    reader.enroll(p);
    TagState tag = TagState::from_provision(p);
    CounterRng reader_rng = rng.stream(kReader.code(), Purpose::ArqFrame);
    CounterRng tag_rng = rng.stream(kTag.code(), Purpose::TagNonce);
    return run_protocol(reader, tag, m, channel, reader_rng, tag_rng);
}

RecoveryResult authenticate_with_recovery(ReaderState& reader, TagState& tag, unsigned m,
                                          const ErasureSource& channel, CounterRng& reader_rng,
                                          CounterRng& tag_rng, unsigned max_rounds, std::uint64_t& slot)
{
    RecoveryResult out;
    while (out.rounds < max_rounds) {
        RunOptions opts;
        opts.first_slot = slot;
        const ProtocolRun run = run_protocol(reader, tag, m, channel, reader_rng, tag_rng, opts);
        slot += m + 3;
        ++out.rounds;
        out.outcomes.push_back(run.outcome);
        if (run.outcome == RunOutcome::MutualSuccess) {
            out.authenticated = true;
            break;
        }
    }
    return out;
}

ProbeResult probe_transcript(const PastTranscript& past, const BitWord& ids, const KeyBundle& k,
                             const KeyBundle& k_prime, const BitWord& id)
{
    ProbeResult r;
    r.ids_linked = (past.msg1.masked_ids ^ k_prime(1)) == ids;
    r.id_unmasked = (past.msg3.masked_id ^ k(5) ^ k_prime(5)) == id;
    const BitWord n_t = past.msg1.masked_nt ^ k_prime(2);
    const BitWord n_r = past.msg2.masked_nr ^ k(2) ^ k_prime(4);
    r.m1_recomputed = prf_eval(k(1) ^ k_prime(3), n_t.concat(n_r)) == past.msg2.m1;
    r.m2_recomputed = prf_eval(k(4) ^ k_prime(5), id.concat(n_r)) == past.msg3.m2;
    return r;
}

void write_transcript_csv(std::ostream& out, const std::vector<TranscriptRow>& rows)
{
    out << "step,sender,message_kind,payload,delivered,hypothesis_used\n";
    for (const auto& r : rows) {
        out << r.step << ',' << r.sender << ',' << r.message_kind << ',' << r.payload << ','
            << (r.delivered ? 1 : 0) << ',';
        if (r.hypothesis_used > 0) {
            out << r.hypothesis_used;
        }
        out << '\n';
    }
}

}  // namespace arqsec::rfid
