#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "arqsec/adversary/rfid_eve.hpp"

namespace arqsec::adversary {

struct WilsonInterval {
    double center = 0.0;
    double half_width = 0.0;
    double lo() const { return center - half_width; }
    double hi() const { return center + half_width; }
    bool contains(double x) const { return x >= lo() && x <= hi(); }
};

inline constexpr double kZ95 = 1.959963984540054;

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct OutageEstimate {
    std::string method = "mc";  // mc | exact | closed_form
    double value = 0.0;
    std::optional<double> ci95;  // Wilson half-width
    std::optional<std::uint64_t> trials;
    std::uint64_t recoveries = 0;
    nlohmann::json params = nlohmann::json::object();

    WilsonInterval interval(double z = kZ95) const;
};

nlohmann::json to_json(const OutageEstimate& e);

struct RfidOutageParams {
    unsigned m = 30;
    unsigned ell = 10;
    double gamma_ab = 0.0;   // reader -> tag
    double gamma_ba = 0.0;   // tag -> reader (ACK bits)
    double gamma_ae = 0.02;  // reader -> eve
    double gamma_be = 0.02;  // tag -> eve

    ChannelSpec channel() const;
    nlohmann::json to_json() const;
};

/// Estimates for Blind, UnboundedKnowsIds and BoundedKnowsIds from one set of
/// trials. A trial whose ARQ stage has no acknowledged frame is aborted and
/// counts as no outage.
std::array<OutageEstimate, 3> simulate_outage_all(const RfidOutageParams& params, std::uint64_t trials,
                                                  std::uint64_t seed, unsigned workers = 1);

OutageEstimate simulate_outage(const RfidOutageParams& params, RfidEveModel model, std::uint64_t trials,
                               std::uint64_t seed, unsigned workers = 1);

}  // namespace arqsec::adversary
