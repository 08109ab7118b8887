#pragma once

#include <cstdint>

namespace arqsec::analysis {

struct TradeoffPoint {
    unsigned m = 0;
    unsigned ell = 0;
    unsigned n = 0;  // expected acknowledged frames, round(m (1 - gamma_ab))
    double reads_per_second = 0.0;
    double outage = 0.0;
};

/// One tag read costs m ARQ frames of 5l + 1 bits; the authentication
/// messages and processing time are not charged.
TradeoffPoint tradeoff_point(unsigned m, unsigned ell, double data_rate_bps, double gamma_ab, double gamma_ae,
                             double gamma_be);

struct AttackEffort {
    bool unbounded = false;
    double scale = 0.0;    // session_size / mean_u
    double minutes = 0.0;  // baseline scaled
    double frames_needed = 0.0;

    double years() const { return minutes / (60.0 * 24.0 * 365.25); }
};

inline constexpr double kBaselineFrames = 1.5e6;
inline constexpr double kBaselineMinutes = 10.0;

/// Time to collect `frames_needed` useful frames when only mean_u of every
/// session_size frames are useful, relative to collecting them all in
/// baseline_minutes.
AttackEffort attack_effort(double mean_u_per_session, double session_size, double frames_needed = kBaselineFrames,
                           double baseline_minutes = kBaselineMinutes);

}  // namespace arqsec::analysis
