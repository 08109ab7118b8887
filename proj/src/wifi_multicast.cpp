#include "arqsec/wifi/multicast.hpp"

namespace arqsec::wifi {

MulticastGroupState MulticastGroupState::create(std::uint32_t group, CipherSuite suite,
                                                std::uint64_t max_frames_per_key)
{
    MulticastGroupState s;
    s.group = group;
    s.suite = suite;
    s.max_frames_per_key = max_frames_per_key;
    return s;
}

void join_group(MulticastGroupState& ap, MemberTable& members, std::uint16_t member)
{
    if (ap.members.insert(member).second) {
        members[member];
        ap.rekey_required = true;
    }
}

void leave_group(MulticastGroupState& ap, MemberTable& members, std::uint16_t member)
{
    if (ap.members.erase(member) != 0) {
        members.erase(member);
        ap.rekey_required = true;
    }
}

RekeyReport multicast_rekey(MulticastGroupState& ap, MemberTable& members, const ErasureSource& links,
                            CounterRng& rng, unsigned retry_budget, std::uint64_t& slot)
{
    const unsigned width = v_width(ap.suite);
    const MulticastKey fresh{ap.next_id, VValue(width, rng.bits(width))};

    RekeyReport report;
    for (std::uint16_t m : ap.members) {
        const LinkId down(kAp, client(m));
        const LinkId up(client(m), kAp);
        bool confirmed = false;
        for (unsigned attempt = 0; attempt < retry_budget && !confirmed; ++attempt, slot += 2) {
            ++report.transmissions;
            if (links.erased(down, slot)) {
                continue;
            }
            members[m].pending = fresh;
            confirmed = !links.erased(up, slot + 1);
        }
        (confirmed ? report.confirmed : report.unreachable).push_back(m);
    }

    if (!report.unreachable.empty()) {
        report.status = RekeyStatus::Stalled;
        return report;
    }
    ap.active = fresh;
    ap.next_id = static_cast<std::uint8_t>(ap.next_id + 1);
    ap.used_headers.clear();
    ap.rekey_required = false;
    report.status = RekeyStatus::Activated;
    return report;
}

std::optional<RekeyReport> rekey_if_required(MulticastGroupState& ap, MemberTable& members,
                                             const ErasureSource& links, CounterRng& rng, unsigned retry_budget,
                                             std::uint64_t& slot)
{
    if (!ap.rekey_required && ap.active) {
        return std::nullopt;
    }
    return multicast_rekey(ap, members, links, rng, retry_budget, slot);
}

DataFrame multicast_encapsulate(MulticastGroupState& ap, CounterRng& rng)
{
    if (!ap.active) {
        throw std::logic_error("multicast group has no active V_g");
    }
    const unsigned width = v_width(ap.suite);
    const std::uint64_t space = std::uint64_t{1} << width;
    const std::uint64_t cap = ap.max_frames_per_key == 0 ? space : std::min(ap.max_frames_per_key, space);
    if (ap.used_headers.size() >= cap) {
        ap.rekey_required = true;
        throw HeaderSpaceExhausted();
    }
    VValue header;
    do {
        header = VValue(width, rng.bits(width));
    } while (ap.used_headers.count(header.value()) != 0);
    ap.used_headers.insert(header.value());

    DataFrame frame;
    frame.header_v = header;
    frame.encapsulation_tag = header ^ ap.active->v_g;
    frame.multicast = MulticastHeader{ap.group, ap.active->id};
    return frame;
}

Outcome multicast_decapsulate(MulticastMemberState& member, const DataFrame& frame)
{
    if (!frame.multicast) {
        return Outcome::AttackDetected;
    }
    const std::uint8_t id = frame.multicast->vg_id;
    if (member.pending && member.pending->id == id && !(member.active && member.active->id == id)) {
        member.active = member.pending;
        member.pending.reset();
        member.seen_headers.clear();
    }
    if (!member.active || member.active->id != id) {
        return Outcome::AttackDetected;
    }
    if (member.seen_headers.count(frame.header_v.value()) != 0) {
        return Outcome::AttackDetected;
    }
    if ((frame.header_v ^ member.active->v_g) != frame.encapsulation_tag) {
        return Outcome::AttackDetected;
    }
    member.seen_headers.insert(frame.header_v.value());
    return Outcome::Accepted;
}

}  // namespace arqsec::wifi
