#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "arqsec/rng.hpp"

namespace arqsec {

/// Raised for malformed or incomplete channel / experiment configuration.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Role : std::uint8_t { Alice, Bob, Eve, AP, Tag, Reader, Client };

/// A node in the simulated network. `index` distinguishes multicast clients.
struct Party {
    Role role = Role::Alice;
    std::uint16_t index = 0;

    auto operator<=>(const Party&) const = default;

    std::uint16_t code() const
    {
        return static_cast<std::uint16_t>((static_cast<unsigned>(role) << 12) | (index & 0x0FFF));
    }
    std::string name() const;
    /// Accepts "alice", "bob", "eve", "ap", "tag", "reader", "client<k>".
    static Party parse(const std::string& name);
};

inline constexpr Party kAlice{Role::Alice, 0};
inline constexpr Party kBob{Role::Bob, 0};
inline constexpr Party kEve{Role::Eve, 0};
inline constexpr Party kAp{Role::AP, 0};
inline constexpr Party kTag{Role::Tag, 0};
inline constexpr Party kReader{Role::Reader, 0};
inline constexpr Party client(std::uint16_t k) { return Party{Role::Client, k}; }

/// Directed link tx -> rx.
struct LinkId {
    Party tx;
    Party rx;

    LinkId(Party from, Party to);

    auto operator<=>(const LinkId&) const = default;

    /// Stream entity for per-link draws.
    std::uint32_t entity() const { return (std::uint32_t{tx.code()} << 16) | rx.code(); }
    /// Stream entity shared by both directions of the pair (one fading state).
    std::uint32_t pair_entity() const;
    LinkId reversed() const { return LinkId(rx, tx); }
    std::string name() const { return tx.name() + "->" + rx.name(); }
};

/// Per-slot erasure probability equals the configured mean.
struct FixedMean {};

/// Per-slot gamma drawn first, uniformly on [mu - w, mu + w] with
/// w = min(spread, mu, 1 - mu), then the Bernoulli outcome. Both directions
/// of a pair share the slot's fading quantile.
struct TwoStage {
    double spread = 0.0;
};

using ChannelModel = std::variant<FixedMean, TwoStage>;

class ChannelSpec {
  public:
    ChannelSpec() = default;
    explicit ChannelSpec(ChannelModel model) : model_(model) {}

    ChannelSpec& set(LinkId link, double mean_erasure);
    /// Sets both directions.
    ChannelSpec& set_pair(Party a, Party b, double mean_erasure);

    bool has(LinkId link) const { return means_.count(link) != 0; }
    double mean(LinkId link) const;
    const ChannelModel& model() const { return model_; }
    const std::map<LinkId, double>& links() const { return means_; }

  private:
    std::map<LinkId, double> means_;
    ChannelModel model_ = FixedMean{};
};

/// Realized per-slot gamma for a link (equal to the mean under FixedMean).
double slot_gamma(const ChannelSpec& spec, LinkId link, std::uint64_t slot, const SeededRng& rng);

bool draw_erasure(const ChannelSpec& spec, LinkId link, std::uint64_t slot, const SeededRng& rng);

/// Forward and reverse outcome of one slot on the pair (link, link.reversed()).
std::pair<bool, bool> same_slot_pair(const ChannelSpec& spec, LinkId forward, std::uint64_t slot,
                                     const SeededRng& rng);

/// Anything that can answer "was this link erased in this slot".
class ErasureSource {
  public:
    virtual ~ErasureSource() = default;
    virtual bool erased(LinkId link, std::uint64_t slot) const = 0;
};

/// Erasures computed on demand from (spec, seed, trial).
class SampledChannel final : public ErasureSource {
  public:
    SampledChannel(ChannelSpec spec, SeededRng rng) : spec_(std::move(spec)), rng_(rng) {}

    bool erased(LinkId link, std::uint64_t slot) const override
    {
        return draw_erasure(spec_, link, slot, rng_);
    }

    const ChannelSpec& spec() const { return spec_; }

  private:
    ChannelSpec spec_;
    SeededRng rng_;
};

/// Materialized erasure pattern; every link has exactly `slots` entries.
class ErasureTrace final : public ErasureSource {
  public:
    explicit ErasureTrace(std::uint64_t slots = 0) : slots_(slots) {}

    /// Adds a link with no erasures (or resets an existing one).
    ErasureTrace& add_link(LinkId link, bool erased_everywhere = false);
    ErasureTrace& set(LinkId link, std::uint64_t slot, bool erased);

    bool erased(LinkId link, std::uint64_t slot) const override;

    std::uint64_t slots() const { return slots_; }
    const std::map<LinkId, std::vector<bool>>& links() const { return pattern_; }
    bool operator==(const ErasureTrace& other) const
    {
        return slots_ == other.slots_ && pattern_ == other.pattern_;
    }

  private:
    std::uint64_t slots_;
    std::map<LinkId, std::vector<bool>> pattern_;
};

ErasureTrace make_trace(const ChannelSpec& spec, std::uint64_t slots, std::uint64_t seed,
                        std::uint64_t trial = 0);

/// Loaded form of {"links": [...], "model": "fixed"|"two_stage", "seed": n}.
struct ChannelConfig {
    ChannelSpec spec;
    std::uint64_t seed = 0;
};

ChannelConfig channel_config_from_json(const nlohmann::json& j);
nlohmann::json channel_config_to_json(const ChannelConfig& cfg);

}  // namespace arqsec
