#pragma once

#include <cstdint>

#include "arqsec/channel.hpp"
#include "arqsec/wifi/overlay.hpp"

namespace arqsec::adversary {

/// How Eve learns the status Q(i) of each data frame.
/// Omniscient: she is told Q(i). Observed: she infers it from the ACKs she
/// captures and goes blind as soon as that inference is wrong.
enum class AckKnowledge { Omniscient, Observed };

const char* ack_knowledge_name(AckKnowledge k);

/// Passive Eve following a unicast session frame by frame. Eve hears
/// Alice on alice->eve and Bob on bob->eve.
class WifiEve {
  public:
    WifiEve(AckKnowledge knowledge, const ErasureSource& eve_channel)
        : knowledge_(knowledge), channel_(eve_channel)
    {
    }

    /// Eve knows V_0 iff she captured every init frame constituting it.
    void observe_init(const wifi::InitResult& init);
    void observe_frame(const wifi::FrameRecord& frame);

    bool blind() const { return blind_; }
    std::uint64_t useful() const { return useful_; }

  private:
    AckKnowledge knowledge_;
    const ErasureSource& channel_;
    bool blind_ = true;
    wifi::VValue base_;  // what Alice XORs with the next header-V
    std::uint64_t useful_ = 0;
};

std::uint64_t wifi_eve_track(const wifi::SessionLog& log, const ErasureSource& eve_channel, AckKnowledge knowledge);

struct UsefulFramesEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

/// Mean u over independent sessions. `spec` must define alice<->bob and
/// alice->eve, bob->eve. Sessions stop early once Eve is blind.
UsefulFramesEstimate simulate_useful_frames(const wifi::SessionConfig& cfg, const ChannelSpec& spec,
                                            AckKnowledge knowledge, std::uint64_t trials, std::uint64_t seed,
                                            unsigned workers = 1);

}  // namespace arqsec::adversary
