#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "arqsec/wifi/overlay.hpp"

namespace arqsec::wifi {

/// All header-Vs allowed under the active V_g have been used.
class HeaderSpaceExhausted : public std::runtime_error {
  public:
    HeaderSpaceExhausted() : std::runtime_error("header-V space exhausted under current V_g; rekey required") {}
};

struct MulticastKey {
    std::uint8_t id = 0;
    VValue v_g;
};

/// AP side of one multicast group.
struct MulticastGroupState {
    std::uint32_t group = 0;
    CipherSuite suite = CipherSuite::Wep24;
    std::optional<MulticastKey> active;
    std::uint8_t next_id = 1;
    std::set<std::uint16_t> members;
    std::unordered_set<std::uint64_t> used_headers;
    /// Frames allowed per V_g lifetime; 0 means the whole header space.
    std::uint64_t max_frames_per_key = 0;
    bool rekey_required = false;

    static MulticastGroupState create(std::uint32_t group, CipherSuite suite, std::uint64_t max_frames_per_key = 0);
};

struct MulticastMemberState {
    std::optional<MulticastKey> active;
    std::optional<MulticastKey> pending;
    std::unordered_set<std::uint64_t> seen_headers;
};

using MemberTable = std::map<std::uint16_t, MulticastMemberState>;

enum class RekeyStatus { Activated, Stalled };

struct RekeyReport {
    RekeyStatus status = RekeyStatus::Stalled;
    std::vector<std::uint16_t> confirmed;
    std::vector<std::uint16_t> unreachable;
    std::uint64_t transmissions = 0;
};

/// Membership changes flag the group for a triggered rekey.
void join_group(MulticastGroupState& ap, MemberTable& members, std::uint16_t member);
void leave_group(MulticastGroupState& ap, MemberTable& members, std::uint16_t member);

/// Distributes a fresh V_g to every member over its pairwise link
/// (AP -> client<k>, ACK on client<k> -> AP). The new key becomes active only
/// once every member has acknowledged it; otherwise the old key stays active.
/// `slot` is advanced by two per delivery attempt.
RekeyReport multicast_rekey(MulticastGroupState& ap, MemberTable& members, const ErasureSource& links,
                            CounterRng& rng, unsigned retry_budget, std::uint64_t& slot);

/// Rekeys only if a membership change or header exhaustion requested it.
std::optional<RekeyReport> rekey_if_required(MulticastGroupState& ap, MemberTable& members,
                                             const ErasureSource& links, CounterRng& rng, unsigned retry_budget,
                                             std::uint64_t& slot);

/// V_eg = V_h xor V_g with a header-V never used under the active V_g.
DataFrame multicast_encapsulate(MulticastGroupState& ap, CounterRng& rng);

Outcome multicast_decapsulate(MulticastMemberState& member, const DataFrame& frame);

}  // namespace arqsec::wifi
