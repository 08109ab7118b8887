#include <doctest.h>

#include "arqsec/adversary/outage_mc.hpp"
#include "arqsec/adversary/rfid_eve.hpp"
#include "arqsec/adversary/wifi_eve.hpp"

using namespace arqsec;
using namespace arqsec::adversary;

namespace {

const LinkId kAB(kAlice, kBob);
const LinkId kBA(kBob, kAlice);
const LinkId kAE(kAlice, kEve);
const LinkId kBE(kBob, kEve);

ErasureTrace wifi_trace()
{
    ErasureTrace t(64);
    t.add_link(kAB).add_link(kBA).add_link(kAE).add_link(kBE);
    return t;
}

std::uint64_t useful(const ErasureTrace& t, AckKnowledge k, std::uint64_t frames = 10)
{
    wifi::SessionConfig cfg;
    cfg.data_frames = frames;
    const auto log = wifi::run_unicast_session(cfg, t, SeededRng(1));
    return wifi_eve_track(log, t, k);
}

}  // namespace

TEST_CASE("wifi eve on hand-built traces")
{
    auto t = wifi_trace();
    CHECK(useful(t, AckKnowledge::Omniscient) == 10);
    CHECK(useful(t, AckKnowledge::Observed) == 10);

    // Bob's init reply missed: V_0 unknown
    auto a = wifi_trace();
    a.set(kBE, 1, true);
    CHECK(useful(a, AckKnowledge::Omniscient) == 0);

    // data frame 3 (slot 6) missed although it was acknowledged
    auto b = wifi_trace();
    b.set(kAE, 6, true);
    CHECK(useful(b, AckKnowledge::Omniscient) == 2);

    // frame 3 missed but never acknowledged: Alice folds it back out
    auto c = wifi_trace();
    c.set(kAE, 6, true);
    c.set(kBA, 7, true);
    CHECK(useful(c, AckKnowledge::Omniscient) == 9);

    // ACK of frame 2 (slot 5) missed by Eve only
    auto d = wifi_trace();
    d.set(kBE, 5, true);
    CHECK(useful(d, AckKnowledge::Omniscient) == 10);
    CHECK(useful(d, AckKnowledge::Observed) == 2);
}

TEST_CASE("observed eve never beats omniscient eve")
{
    ChannelSpec spec;
    spec.set_pair(kAlice, kBob, 0.1).set(kAE, 0.02).set(kBE, 0.05);
    wifi::SessionConfig cfg;
    cfg.data_frames = 200;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
        const SeededRng rng(2, trial);
        const SampledChannel ch(spec, rng);
        const auto log = wifi::run_unicast_session(cfg, ch, rng);
        CHECK(wifi_eve_track(log, ch, AckKnowledge::Observed) <= wifi_eve_track(log, ch, AckKnowledge::Omniscient));
    }
}

TEST_CASE("useful-frame estimate is deterministic across worker counts")
{
    ChannelSpec spec;
    spec.set_pair(kAlice, kBob, 0.05).set(kAE, 0.01).set(kBE, 0.01);
    wifi::SessionConfig cfg;
    cfg.data_frames = 500;
    const auto one = simulate_useful_frames(cfg, spec, AckKnowledge::Omniscient, 300, 3, 1);
    const auto four = simulate_useful_frames(cfg, spec, AckKnowledge::Omniscient, 300, 3, 4);
    CHECK(one.mean == four.mean);
    CHECK(one.std_error == four.std_error);
    CHECK(one.mean > 0);
    CHECK_THROWS_AS(simulate_useful_frames(cfg, spec, AckKnowledge::Omniscient, 0, 3), std::invalid_argument);
}

namespace {

const LinkId kDown(kReader, kTag);
const LinkId kUp(kTag, kReader);
const LinkId kRE(kReader, kEve);
const LinkId kTE(kTag, kEve);

rfid::ArqResult clean_arq(unsigned m, unsigned ell, std::uint64_t seed)
{
    ErasureTrace t(m);
    t.add_link(kDown).add_link(kUp);
    CounterRng rng(seed);
    return rfid::run_arq_stage(m, ell, t, rng);
}

ErasureTrace eve_trace(unsigned m, unsigned missed_acks, unsigned missed_frames = 0)
{
    ErasureTrace t(m);
    t.add_link(kRE).add_link(kTE);
    for (unsigned i = 0; i < missed_acks; ++i) {
        t.set(kTE, i, true);
    }
    for (unsigned i = 0; i < missed_frames; ++i) {
        t.set(kRE, m - 1 - i, true);
    }
    return t;
}

}  // namespace

TEST_CASE("rfid eve models at the search budget boundary")
{
    const unsigned ell = 4;
    const auto arq = clean_arq(10, ell, 4);
    REQUIRE(arq.acked.size() == 10);

    const auto all = eve_trace(10, 0);
    for (auto m : {RfidEveModel::Blind, RfidEveModel::UnboundedKnowsIds, RfidEveModel::BoundedKnowsIds}) {
        CHECK(rfid_eve_recovers(arq, all, m, ell).recovered);
    }

    const auto below = eve_trace(10, ell - 1);
    CHECK_FALSE(rfid_eve_recovers(arq, below, RfidEveModel::Blind, ell).recovered);
    CHECK(rfid_eve_recovers(arq, below, RfidEveModel::Blind, ell).cause == OutageCause::MissedAck);
    CHECK(rfid_eve_recovers(arq, below, RfidEveModel::BoundedKnowsIds, ell).recovered);
    CHECK(rfid_eve_recovers(arq, below, RfidEveModel::UnboundedKnowsIds, ell).recovered);

    const auto at = eve_trace(10, ell);
    const auto ev = rfid_eve_recovers(arq, at, RfidEveModel::BoundedKnowsIds, ell);
    CHECK_FALSE(ev.recovered);
    CHECK(ev.cause == OutageCause::BudgetExceeded);
    CHECK(ev.missed_acks == ell);
    CHECK(rfid_eve_recovers(arq, at, RfidEveModel::UnboundedKnowsIds, ell).recovered);

    const auto frame = eve_trace(10, 0, 1);
    for (auto m : {RfidEveModel::Blind, RfidEveModel::UnboundedKnowsIds, RfidEveModel::BoundedKnowsIds}) {
        const auto e = rfid_eve_recovers(arq, frame, m, ell);
        CHECK_FALSE(e.recovered);
        CHECK(e.cause == OutageCause::MissedAckedFrame);
    }
}

TEST_CASE("bounded search finds the tag key when every delivered frame was captured")
{
    const unsigned ell = 8;
    ChannelSpec spec;
    spec.set(kDown, 0.2).set(kUp, 0.2).set(kRE, 0.05).set(kTE, 0.2);
    unsigned searched = 0;
    for (std::uint64_t t = 0; t < 3000; ++t) {
        const SampledChannel ch(spec, SeededRng(5, t));
        CounterRng rng(t);
        rfid::TagArqBuffer tag;
        tag.reset(ell);
        const auto arq = rfid::arq_exchange(12, ell, ch, rng, tag);
        if (arq.acked.empty()) {
            continue;
        }
        const auto ev = rfid_eve_recovers_with_search(arq, ch, ell, t);
        bool heard_all = true;
        for (const auto& rec : arq.records) {
            heard_all = heard_all && (!rec.delivered || !ch.erased(kRE, rec.slot));
        }
        if (ev.full_key_found.value_or(false)) {
            ++searched;
            CHECK(*ev.prefix_matches >= 1);
        } else if (ev.prefix_matches && heard_all) {
            FAIL_CHECK("search missed the key although every delivered frame was captured");
        }
    }
    CHECK(searched > 100);
}

TEST_CASE("rfid model dominance per trial")
{
    ChannelSpec spec;
    spec.set(kDown, 0.05).set(kUp, 0.05).set(kRE, 0.05).set(kTE, 0.1);
    for (std::uint64_t t = 0; t < 2000; ++t) {
        const SampledChannel ch(spec, SeededRng(6, t));
        CounterRng rng(t);
        rfid::TagArqBuffer tag;
        tag.reset(3);
        const auto arq = rfid::arq_exchange(20, 3, ch, rng, tag);
        const bool blind = rfid_eve_recovers(arq, ch, RfidEveModel::Blind, 3).recovered;
        const bool bounded = rfid_eve_recovers(arq, ch, RfidEveModel::BoundedKnowsIds, 3).recovered;
        const bool unbounded = rfid_eve_recovers(arq, ch, RfidEveModel::UnboundedKnowsIds, 3).recovered;
        CHECK((!blind || bounded));
        CHECK((!bounded || unbounded));
    }
}

TEST_CASE("wilson interval")
{
    const auto w = wilson_interval(50, 100);
    CHECK(w.center == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(w.half_width == doctest::Approx(0.09616846963400436).epsilon(1e-12));
    const auto v = wilson_interval(300, 1000);
    CHECK(v.center == doctest::Approx(0.300765351697111).epsilon(1e-12));
    CHECK(v.half_width == doctest::Approx(0.02835850922010617).epsilon(1e-12));
    const auto z = wilson_interval(0, 40);
    CHECK(z.lo() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(z.hi() > 0);
    CHECK(wilson_interval(40, 40).hi() == doctest::Approx(1.0));
    CHECK_THROWS(wilson_interval(1, 0));
}

TEST_CASE("blind outage for two frames on symmetric channels")
{
    RfidOutageParams p;
    p.m = 2;
    p.ell = 4;
    p.gamma_ae = 0.1;
    p.gamma_be = 0.1;
    const auto est = simulate_outage(p, RfidEveModel::Blind, 40000, 7);
    CHECK(est.method == "mc");
    REQUIRE(est.trials.has_value());
    CHECK(*est.trials == 40000);
    // Eve needs both frames and both ACKs: 0.9^4
    CHECK(est.interval(3.29).contains(0.6561));
    CHECK(est.value == static_cast<double>(est.recoveries) / 40000.0);
}

TEST_CASE("outage estimates are deterministic across worker counts")
{
    RfidOutageParams p;
    p.m = 12;
    p.ell = 3;
    p.gamma_ab = 0.05;
    p.gamma_ba = 0.05;
    p.gamma_be = 0.1;
    const auto one = simulate_outage_all(p, 5000, 8, 1);
    const auto many = simulate_outage_all(p, 5000, 8, 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(one[i].recoveries == many[i].recoveries);
        CHECK(one[i].value == many[i].value);
    }
    // Blind <= Bounded <= Unbounded
    CHECK(one[0].value <= one[2].value);
    CHECK(one[2].value <= one[1].value);
    const auto j = to_json(one[0]);
    CHECK(j.at("method") == "mc");
    CHECK(j.at("params").at("m") == 12);
}

TEST_CASE("model names")
{
    for (auto m : {RfidEveModel::Blind, RfidEveModel::UnboundedKnowsIds, RfidEveModel::BoundedKnowsIds}) {
        CHECK(parse_rfid_model(rfid_model_name(m)) == m);
    }
    CHECK_THROWS_AS(parse_rfid_model("psychic"), ConfigError);
}
