#include <doctest.h>

#include "arqsec/wifi/multicast.hpp"

using namespace arqsec;
using namespace arqsec::wifi;

namespace {

ErasureTrace links_for(std::initializer_list<std::uint16_t> ids, std::uint64_t slots)
{
    ErasureTrace t(slots);
    for (auto id : ids) {
        t.add_link(LinkId(kAp, client(id))).add_link(LinkId(client(id), kAp));
    }
    return t;
}

struct Group {
    MulticastGroupState ap = MulticastGroupState::create(7, CipherSuite::Wep24);
    MemberTable members;
};

}  // namespace

TEST_CASE("rekey activates once every member confirms")
{
    Group g;
    join_group(g.ap, g.members, 1);
    join_group(g.ap, g.members, 2);
    CHECK(g.ap.rekey_required);
    const auto links = links_for({1, 2}, 64);
    CounterRng rng(1);
    std::uint64_t slot = 0;
    const auto rep = rekey_if_required(g.ap, g.members, links, rng, 4, slot);
    REQUIRE(rep.has_value());
    CHECK(rep->status == RekeyStatus::Activated);
    CHECK(rep->transmissions == 2);
    CHECK(slot == 4);
    CHECK_FALSE(g.ap.rekey_required);
    REQUIRE(g.ap.active.has_value());

    // nothing changed: no rekey
    CHECK_FALSE(rekey_if_required(g.ap, g.members, links, rng, 4, slot).has_value());

    for (int i = 0; i < 20; ++i) {
        const DataFrame f = multicast_encapsulate(g.ap, rng);
        CHECK(f.encapsulation_tag == (f.header_v ^ g.ap.active->v_g));
        CHECK(multicast_decapsulate(g.members[1], f) == Outcome::Accepted);
        CHECK(multicast_decapsulate(g.members[2], f) == Outcome::Accepted);
    }
}

TEST_CASE("lost ACK from one member stalls the rekey")
{
    Group g;
    join_group(g.ap, g.members, 1);
    join_group(g.ap, g.members, 2);
    auto links = links_for({1, 2}, 64);
    links.add_link(LinkId(client(2), kAp), true);
    CounterRng rng(2);
    std::uint64_t slot = 0;
    const auto rep = multicast_rekey(g.ap, g.members, links, rng, 3, slot);
    CHECK(rep.status == RekeyStatus::Stalled);
    CHECK(rep.confirmed == std::vector<std::uint16_t>{1});
    CHECK(rep.unreachable == std::vector<std::uint16_t>{2});
    CHECK(rep.transmissions == 4);
    CHECK_FALSE(g.ap.active.has_value());
    CHECK(g.ap.rekey_required);
    CHECK_THROWS_AS(multicast_encapsulate(g.ap, rng), std::logic_error);
}

TEST_CASE("membership changes retire the old group key")
{
    Group g;
    join_group(g.ap, g.members, 1);
    join_group(g.ap, g.members, 2);
    const auto links = links_for({1, 2, 3}, 256);
    CounterRng rng(3);
    std::uint64_t slot = 0;
    multicast_rekey(g.ap, g.members, links, rng, 2, slot);
    const MulticastMemberState departed = g.members[2];
    const DataFrame before = multicast_encapsulate(g.ap, rng);

    leave_group(g.ap, g.members, 2);
    CHECK(g.ap.rekey_required);
    CHECK(g.members.count(2) == 0);
    const auto rep = rekey_if_required(g.ap, g.members, links, rng, 2, slot);
    REQUIRE(rep.has_value());
    CHECK(rep->status == RekeyStatus::Activated);

    const DataFrame after = multicast_encapsulate(g.ap, rng);
    CHECK(after.multicast->vg_id != before.multicast->vg_id);
    MulticastMemberState stale = departed;
    CHECK(multicast_decapsulate(stale, after) == Outcome::AttackDetected);

    // remaining member switches keys and rejects frames under the retired id
    CHECK(multicast_decapsulate(g.members[1], after) == Outcome::Accepted);
    CHECK(multicast_decapsulate(g.members[1], before) == Outcome::AttackDetected);

    join_group(g.ap, g.members, 3);
    CHECK(g.ap.rekey_required);
}

TEST_CASE("repeated header and forged tag are rejected")
{
    Group g;
    join_group(g.ap, g.members, 1);
    const auto links = links_for({1}, 16);
    CounterRng rng(4);
    std::uint64_t slot = 0;
    multicast_rekey(g.ap, g.members, links, rng, 1, slot);
    const DataFrame f = multicast_encapsulate(g.ap, rng);
    auto& m = g.members[1];
    CHECK(multicast_decapsulate(m, f) == Outcome::Accepted);
    CHECK(multicast_decapsulate(m, f) == Outcome::AttackDetected);

    DataFrame forged = multicast_encapsulate(g.ap, rng);
    forged.encapsulation_tag = forged.encapsulation_tag ^ VValue(24, 1);
    CHECK(multicast_decapsulate(m, forged) == Outcome::AttackDetected);

    DataFrame unicast = multicast_encapsulate(g.ap, rng);
    unicast.multicast.reset();
    CHECK(multicast_decapsulate(m, unicast) == Outcome::AttackDetected);
}

TEST_CASE("header space exhaustion forces a rekey")
{
    Group g;
    g.ap.max_frames_per_key = 5;
    join_group(g.ap, g.members, 1);
    const auto links = links_for({1}, 16);
    CounterRng rng(5);
    std::uint64_t slot = 0;
    multicast_rekey(g.ap, g.members, links, rng, 1, slot);
    std::set<std::uint64_t> headers;
    for (int i = 0; i < 5; ++i) {
        headers.insert(multicast_encapsulate(g.ap, rng).header_v.value());
    }
    CHECK(headers.size() == 5);
    CHECK_THROWS_AS(multicast_encapsulate(g.ap, rng), HeaderSpaceExhausted);
    CHECK(g.ap.rekey_required);
    const auto rep = rekey_if_required(g.ap, g.members, links, rng, 1, slot);
    REQUIRE(rep.has_value());
    CHECK(rep->status == RekeyStatus::Activated);
    CHECK_NOTHROW(multicast_encapsulate(g.ap, rng));
}
