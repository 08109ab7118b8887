#include "arqsec/adversary/outage_mc.hpp"

#include <cmath>
#include <stdexcept>

#include "arqsec/parallel.hpp"

namespace arqsec::adversary {

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z)
{
    if (trials == 0) {
        throw std::invalid_argument("wilson_interval: no trials");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    WilsonInterval w;
    w.center = (p + z2 / (2 * n)) / denom;
    w.half_width = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / denom;
    return w;
}

WilsonInterval OutageEstimate::interval(double z) const
{
    if (!trials) {
        return WilsonInterval{value, 0.0};
    }
    return wilson_interval(recoveries, *trials, z);
}

nlohmann::json to_json(const OutageEstimate& e)
{
    nlohmann::json j;
    j["method"] = e.method;
    j["value"] = e.value;
    j["ci95"] = e.ci95 ? nlohmann::json(*e.ci95) : nlohmann::json(nullptr);
    j["trials"] = e.trials ? nlohmann::json(*e.trials) : nlohmann::json(nullptr);
    j["params"] = e.params;
    return j;
}

ChannelSpec RfidOutageParams::channel() const
{
    ChannelSpec spec;
    spec.set(LinkId(kReader, kTag), gamma_ab);
    spec.set(LinkId(kTag, kReader), gamma_ba);
    spec.set(LinkId(kReader, kEve), gamma_ae);
    spec.set(LinkId(kTag, kEve), gamma_be);
    return spec;
}

nlohmann::json RfidOutageParams::to_json() const
{
    return {{"m", m},
            {"ell", ell},
            {"gamma_ab", gamma_ab},
            {"gamma_ba", gamma_ba},
            {"gamma_ae", gamma_ae},
            {"gamma_be", gamma_be}};
}

std::array<OutageEstimate, 3> simulate_outage_all(const RfidOutageParams& params, std::uint64_t trials,
                                                  std::uint64_t seed, unsigned workers)
{
    if (trials == 0) {
        throw std::invalid_argument("trials must be >= 1");
    }
    constexpr std::array<RfidEveModel, 3> models{RfidEveModel::Blind, RfidEveModel::UnboundedKnowsIds,
                                                 RfidEveModel::BoundedKnowsIds};
    const ChannelSpec spec = params.channel();
    using Counts = std::array<std::uint64_t, 3>;
    const auto parts = parallel_map_reduce<Counts>(trials, workers, [&](std::uint64_t trial, Counts& acc) {
        const SeededRng rng(seed, trial);
        const SampledChannel channel(spec, rng);
        CounterRng reader_rng = rng.stream(kReader.code(), Purpose::ArqFrame);
        rfid::TagArqBuffer tag;
        tag.reset(params.ell);
        const rfid::ArqResult arq = rfid::arq_exchange(params.m, params.ell, channel, reader_rng, tag);
        if (arq.acked.empty()) {
            return;
        }
        for (std::size_t i = 0; i < models.size(); ++i) {
            acc[i] += rfid_eve_recovers(arq, channel, models[i], params.ell, trial).recovered ? 1 : 0;
        }
    });
    Counts total{};
    for (const auto& p : parts) {
        for (std::size_t i = 0; i < total.size(); ++i) {
            total[i] += p[i];
        }
    }
    std::array<OutageEstimate, 3> out;
    for (std::size_t i = 0; i < models.size(); ++i) {
        OutageEstimate& e = out[i];
        e.method = "mc";
        e.trials = trials;
        e.recoveries = total[i];
        e.value = static_cast<double>(total[i]) / static_cast<double>(trials);
        e.ci95 = wilson_interval(total[i], trials).half_width;
        e.params = params.to_json();
        e.params["model"] = rfid_model_name(models[i]);
        e.params["seed"] = seed;
    }
    return out;
}

OutageEstimate simulate_outage(const RfidOutageParams& params, RfidEveModel model, std::uint64_t trials,
                               std::uint64_t seed, unsigned workers)
{
    auto all = simulate_outage_all(params, trials, seed, workers);
    return all[static_cast<std::size_t>(model)];
}

}  // namespace arqsec::adversary
