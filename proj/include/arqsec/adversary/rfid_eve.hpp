#pragma once

#include <cstdint>
#include <optional>

#include "arqsec/channel.hpp"
#include "arqsec/rfid/protocol.hpp"

namespace arqsec::adversary {

/// Blind: does not know IDS. UnboundedKnowsIds: knows IDS and can search
/// any number of ACK-status patterns. BoundedKnowsIds: knows IDS, searches
/// only fewer than l unknown statuses.
enum class RfidEveModel { Blind, UnboundedKnowsIds, BoundedKnowsIds };

const char* rfid_model_name(RfidEveModel m);
RfidEveModel parse_rfid_model(const std::string& name);

enum class OutageCause { None, MissedAckedFrame, MissedAck, BudgetExceeded };

const char* cause_name(OutageCause c);

struct OutageEvent {
    std::uint64_t trial = 0;
    bool recovered = false;
    OutageCause cause = OutageCause::None;
    unsigned missed_frames = 0;  // among the acked set
    unsigned missed_acks = 0;    // among the acked set
    /// Bounded model with a known k'1 target: number of ACK-status
    /// assignments over Eve's unknowns whose k'1 prefix matches, and whether
    /// one of them yields the full k'. Unset when the search was skipped.
    std::optional<unsigned> prefix_matches;
    std::optional<bool> full_key_found;
};

/// Eve hears frames on reader->eve and ACK bits on tag->eve, both in the
/// frame's slot.
OutageEvent rfid_eve_recovers(const rfid::ArqResult& arq, const ErasureSource& eve_channel, RfidEveModel model,
                              unsigned ell, std::uint64_t trial = 0);

/// Bounded-model recovery plus the actual k'1 prefix search (at most
/// `max_unknowns` unknown statuses) against the tag's distilled key.
OutageEvent rfid_eve_recovers_with_search(const rfid::ArqResult& arq, const ErasureSource& eve_channel,
                                          unsigned ell, std::uint64_t trial = 0, unsigned max_unknowns = 16);

}  // namespace arqsec::adversary
