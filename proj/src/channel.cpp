#include "arqsec/channel.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace arqsec {

namespace {

constexpr std::array<const char*, 7> kRoleNames = {"alice", "bob", "eve", "ap", "tag", "reader", "client"};

void check_probability(double p, const std::string& what)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ConfigError(what + " must lie in [0, 1]");
    }
}

}  // namespace

std::string Party::name() const
{
    std::string out = kRoleNames[static_cast<std::size_t>(role)];
    if (role == Role::Client) {
        out += std::to_string(index);
    }
    return out;
}

Party Party::parse(const std::string& name)
{
    for (std::size_t r = 0; r < kRoleNames.size(); ++r) {
        const std::string prefix = kRoleNames[r];
        if (static_cast<Role>(r) == Role::Client) {
            if (name.size() > prefix.size() && name.compare(0, prefix.size(), prefix) == 0) {
                const std::string digits = name.substr(prefix.size());
                if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
                    break;
                }
                return Party{Role::Client, static_cast<std::uint16_t>(std::stoul(digits))};
            }
        } else if (name == prefix) {
            return Party{static_cast<Role>(r), 0};
        }
    }
    throw ConfigError("unknown party: " + name);
}

LinkId::LinkId(Party from, Party to) : tx(from), rx(to)
{
    if (tx == rx) {
        throw ConfigError("link endpoints must differ: " + tx.name());
    }
}

std::uint32_t LinkId::pair_entity() const
{
    const std::uint16_t a = std::min(tx.code(), rx.code());
    const std::uint16_t b = std::max(tx.code(), rx.code());
    return (std::uint32_t{a} << 16) | b;
}

ChannelSpec& ChannelSpec::set(LinkId link, double mean_erasure)
{
    check_probability(mean_erasure, "mean erasure of " + link.name());
    means_[link] = mean_erasure;
    return *this;
}

ChannelSpec& ChannelSpec::set_pair(Party a, Party b, double mean_erasure)
{
    set(LinkId(a, b), mean_erasure);
    return set(LinkId(b, a), mean_erasure);
}

double ChannelSpec::mean(LinkId link) const
{
    auto it = means_.find(link);
    if (it == means_.end()) {
        throw ConfigError("no channel configured for link " + link.name());
    }
    return it->second;
}

double slot_gamma(const ChannelSpec& spec, LinkId link, std::uint64_t slot, const SeededRng& rng)
{
    const double mu = spec.mean(link);
    if (const auto* two = std::get_if<TwoStage>(&spec.model())) {
        const double w = std::min({two->spread, mu, 1.0 - mu});
        if (w <= 0.0) {
            return mu;
        }
        const double q = rng.stream(link.pair_entity(), Purpose::Fading).uniform_at(slot);
        return std::clamp(mu - w + 2.0 * w * q, 0.0, 1.0);
    }
    return mu;
}

bool draw_erasure(const ChannelSpec& spec, LinkId link, std::uint64_t slot, const SeededRng& rng)
{
    const double gamma = slot_gamma(spec, link, slot, rng);
    return rng.stream(link.entity(), Purpose::Erasure).uniform_at(slot) < gamma;
}

std::pair<bool, bool> same_slot_pair(const ChannelSpec& spec, LinkId forward, std::uint64_t slot,
                                     const SeededRng& rng)
{
    return {draw_erasure(spec, forward, slot, rng), draw_erasure(spec, forward.reversed(), slot, rng)};
}

ErasureTrace& ErasureTrace::add_link(LinkId link, bool erased_everywhere)
{
    pattern_[link] = std::vector<bool>(slots_, erased_everywhere);
    return *this;
}

ErasureTrace& ErasureTrace::set(LinkId link, std::uint64_t slot, bool erased)
{
    auto it = pattern_.find(link);
    if (it == pattern_.end()) {
        throw ConfigError("trace has no link " + link.name());
    }
    it->second.at(slot) = erased;
    return *this;
}

bool ErasureTrace::erased(LinkId link, std::uint64_t slot) const
{
    auto it = pattern_.find(link);
    if (it == pattern_.end()) {
        throw ConfigError("trace has no link " + link.name());
    }
    if (slot >= slots_) {
        throw std::out_of_range("slot " + std::to_string(slot) + " beyond trace length");
    }
    return it->second[slot];
}

ErasureTrace make_trace(const ChannelSpec& spec, std::uint64_t slots, std::uint64_t seed, std::uint64_t trial)
{
    const SeededRng rng(seed, trial);
    ErasureTrace trace(slots);
    for (const auto& [link, mean] : spec.links()) {
        trace.add_link(link);
        for (std::uint64_t s = 0; s < slots; ++s) {
            if (draw_erasure(spec, link, s, rng)) {
                trace.set(link, s, true);
            }
        }
    }
    return trace;
}

ChannelConfig channel_config_from_json(const nlohmann::json& j)
{
    ChannelConfig cfg;
    const std::string model = j.value("model", std::string("fixed"));
    if (model == "fixed") {
        cfg.spec = ChannelSpec(FixedMean{});
    } else if (model == "two_stage") {
        const double spread = j.value("spread", 0.0);
        if (!(spread >= 0.0 && spread <= 0.5)) {
            throw ConfigError("two_stage spread must lie in [0, 0.5]");
        }
        cfg.spec = ChannelSpec(TwoStage{spread});
    } else {
        throw ConfigError("unknown channel model: " + model);
    }
    if (!j.contains("links") || !j["links"].is_array()) {
        throw ConfigError("channel config needs a \"links\" array");
    }
    for (const auto& entry : j["links"]) {
        try {
            cfg.spec.set(LinkId(Party::parse(entry.at("tx").get<std::string>()),
                                Party::parse(entry.at("rx").get<std::string>())),
                         entry.at("mean_erasure").get<double>());
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("bad link entry: ") + e.what());
        }
    }
    cfg.seed = j.value("seed", std::uint64_t{0});
    return cfg;
}

nlohmann::json channel_config_to_json(const ChannelConfig& cfg)
{
    nlohmann::json j;
    j["links"] = nlohmann::json::array();
    for (const auto& [link, mean] : cfg.spec.links()) {
        j["links"].push_back({{"tx", link.tx.name()}, {"rx", link.rx.name()}, {"mean_erasure", mean}});
    }
    if (const auto* two = std::get_if<TwoStage>(&cfg.spec.model())) {
        j["model"] = "two_stage";
        j["spread"] = two->spread;
    } else {
        j["model"] = "fixed";
    }
    j["seed"] = cfg.seed;
    return j;
}

}  // namespace arqsec
