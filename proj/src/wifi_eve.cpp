#include "arqsec/adversary/wifi_eve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "arqsec/parallel.hpp"

namespace arqsec::adversary {

const char* ack_knowledge_name(AckKnowledge k)
{
    return k == AckKnowledge::Omniscient ? "omniscient" : "observed";
}

void WifiEve::observe_init(const wifi::InitResult& init)
{
    const LinkId a_to_e(kAlice, kEve);
    const LinkId b_to_e(kBob, kEve);
    base_ = wifi::VValue::zero(init.v0_alice.width());
    blind_ = false;
    useful_ = 0;
    for (const auto& rec : init.transcript) {
        if (!rec.constituent) {
            continue;
        }
        const LinkId link = rec.sender == kAlice ? a_to_e : b_to_e;
        if (channel_.erased(link, rec.slot)) {
            blind_ = true;
            return;
        }
        base_ ^= rec.frame.random;
    }
}

void WifiEve::observe_frame(const wifi::FrameRecord& frame)
{
    if (blind_) {
        return;
    }
    const bool captured = !channel_.erased(LinkId(kAlice, kEve), frame.slot);
    if (captured && (frame.header_v ^ base_) == frame.v_e) {
        ++useful_;
    }
    bool q = frame.ack_delivered;
    if (knowledge_ == AckKnowledge::Observed) {
        const bool ack_sent = frame.outcome && *frame.outcome == wifi::Outcome::Accepted;
        const bool ack_seen = ack_sent && !channel_.erased(LinkId(kBob, kEve), frame.slot + 1);
        if (ack_seen != frame.ack_delivered) {
            blind_ = true;
            return;
        }
        q = ack_seen;
    }
    if (q) {
        if (!captured) {
            blind_ = true;
            return;
        }
        base_ ^= frame.header_v;
    }
}

std::uint64_t wifi_eve_track(const wifi::SessionLog& log, const ErasureSource& eve_channel, AckKnowledge knowledge)
{
    WifiEve eve(knowledge, eve_channel);
    eve.observe_init(log.init);
    for (const auto& f : log.frames) {
        eve.observe_frame(f);
    }
    return eve.useful();
}

UsefulFramesEstimate simulate_useful_frames(const wifi::SessionConfig& cfg, const ChannelSpec& spec,
                                            AckKnowledge knowledge, std::uint64_t trials, std::uint64_t seed,
                                            unsigned workers)
{
    if (trials == 0) {
        throw std::invalid_argument("trials must be >= 1");
    }
    struct Acc {
        std::uint64_t sum = 0;
        std::uint64_t sum_sq = 0;
    };
    const auto parts = parallel_map_reduce<Acc>(
        trials, workers,
        [&](std::uint64_t trial, Acc& acc) {
            const SeededRng rng(seed, trial);
            const SampledChannel channel(spec, rng);
            wifi::UnicastSession session(cfg, channel, rng);
            WifiEve eve(knowledge, channel);
            eve.observe_init(session.init());
            while (!session.done() && !eve.blind()) {
                eve.observe_frame(session.step());
            }
            const std::uint64_t u = eve.useful();
            acc.sum += u;
            acc.sum_sq += u * u;
        });
    Acc total;
    for (const auto& p : parts) {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
    }
    const double n = static_cast<double>(trials);
    UsefulFramesEstimate out;
    out.trials = trials;
    out.mean = static_cast<double>(total.sum) / n;
    const double var =
        trials > 1 ? std::max(0.0, (static_cast<double>(total.sum_sq) - n * out.mean * out.mean) / (n - 1)) : 0.0;
    out.std_error = std::sqrt(var / n);
    return out;
}

}  // namespace arqsec::adversary
