#include "arqsec/adversary/rfid_eve.hpp"

#include <vector>

namespace arqsec::adversary {

const char* rfid_model_name(RfidEveModel m)
{
    switch (m) {
    case RfidEveModel::Blind: return "blind";
    case RfidEveModel::UnboundedKnowsIds: return "unbounded_knows_ids";
    case RfidEveModel::BoundedKnowsIds: return "bounded_knows_ids";
    }
    return "?";
}

RfidEveModel parse_rfid_model(const std::string& name)
{
    if (name == "blind") return RfidEveModel::Blind;
    if (name == "unbounded_knows_ids") return RfidEveModel::UnboundedKnowsIds;
    if (name == "bounded_knows_ids") return RfidEveModel::BoundedKnowsIds;
    throw ConfigError("unknown RFID eve model: " + name);
}

const char* cause_name(OutageCause c)
{
    switch (c) {
    case OutageCause::None: return "none";
    case OutageCause::MissedAckedFrame: return "missed_acked_frame";
    case OutageCause::MissedAck: return "missed_ack";
    case OutageCause::BudgetExceeded: return "budget_exceeded";
    }
    return "?";
}

OutageEvent rfid_eve_recovers(const rfid::ArqResult& arq, const ErasureSource& eve_channel, RfidEveModel model,
                              unsigned ell, std::uint64_t trial)
{
    const LinkId frame_link(kReader, kEve);
    const LinkId ack_link(kTag, kEve);
    OutageEvent ev;
    ev.trial = trial;
    for (std::size_t idx : arq.acked) {
        const std::uint64_t slot = arq.records[idx].slot;
        ev.missed_frames += eve_channel.erased(frame_link, slot) ? 1 : 0;
        ev.missed_acks += eve_channel.erased(ack_link, slot) ? 1 : 0;
    }
    if (ev.missed_frames > 0) {
        ev.cause = OutageCause::MissedAckedFrame;
    } else if (model == RfidEveModel::Blind && ev.missed_acks > 0) {
        ev.cause = OutageCause::MissedAck;
    } else if (model == RfidEveModel::BoundedKnowsIds && ev.missed_acks >= ell) {
        ev.cause = OutageCause::BudgetExceeded;
    }
    ev.recovered = ev.cause == OutageCause::None;
    return ev;
}

OutageEvent rfid_eve_recovers_with_search(const rfid::ArqResult& arq, const ErasureSource& eve_channel,
                                          unsigned ell, std::uint64_t trial, unsigned max_unknowns)
{
    OutageEvent ev = rfid_eve_recovers(arq, eve_channel, RfidEveModel::BoundedKnowsIds, ell, trial);
    if (!ev.recovered) {
        return ev;
    }
    // A captured frame is known to be in the tag's key when Eve heard its
    // ACK and either it is the last transmission or she saw the next one
    // carry the flipped sequence bit. Every other captured frame is a guess.
    const LinkId frame_link(kReader, kEve);
    const LinkId ack_link(kTag, kEve);
    rfid::KeyBundle known = rfid::KeyBundle::zero(ell);
    std::vector<rfid::KeyBundle> unknown;
    const auto& recs = arq.records;
    for (std::size_t j = 0; j < recs.size(); ++j) {
        const auto& rec = recs[j];
        if (eve_channel.erased(frame_link, rec.slot)) {
            continue;
        }
        const bool ack_heard = rec.delivered && !eve_channel.erased(ack_link, rec.slot);
        bool confirmed = false;
        if (ack_heard) {
            confirmed = j + 1 == recs.size() ||
                        (!eve_channel.erased(frame_link, recs[j + 1].slot) &&
                         recs[j + 1].frame.seq_bit != rec.frame.seq_bit);
        }
        if (confirmed) {
            known ^= rec.frame.random;
        } else {
            unknown.push_back(rec.frame.random);
        }
    }
    if (unknown.size() > max_unknowns) {
        return ev;
    }
    const rfid::KeyBundle& target = arq.k_prime_tag;
    unsigned matches = 0;
    bool full = false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << unknown.size()); ++mask) {
        rfid::KeyBundle cand = known;
        for (std::size_t b = 0; b < unknown.size(); ++b) {
            if ((mask >> b) & 1U) {
                cand ^= unknown[b];
            }
        }
        if (cand(1) == target(1)) {
            ++matches;
            full = full || cand == target;
        }
    }
    ev.prefix_matches = matches;
    ev.full_key_found = full;
    return ev;
}

}  // namespace arqsec::adversary
