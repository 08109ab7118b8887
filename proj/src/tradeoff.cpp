#include "arqsec/analysis/tradeoff.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "arqsec/analysis/closed_form.hpp"
#include "arqsec/rfid/protocol.hpp"

namespace arqsec::analysis {

TradeoffPoint tradeoff_point(unsigned m, unsigned ell, double data_rate_bps, double gamma_ab, double gamma_ae,
                             double gamma_be)
{
    if (!(data_rate_bps > 0.0) || m == 0 || ell == 0) {
        throw std::invalid_argument("tradeoff_point needs m, l and data rate > 0");
    }
    TradeoffPoint p;
    p.m = m;
    p.ell = ell;
    p.reads_per_second = data_rate_bps / (static_cast<double>(m) * rfid::arq_frame_bits(ell));
    p.n = static_cast<unsigned>(std::lround(static_cast<double>(m) * (1.0 - gamma_ab)));
    p.outage = outage_blind(gamma_ae, gamma_be, p.n);
    return p;
}

AttackEffort attack_effort(double mean_u_per_session, double session_size, double frames_needed,
                           double baseline_minutes)
{
    if (mean_u_per_session < 0.0 || !(session_size > 0.0)) {
        throw std::invalid_argument("attack_effort: bad session parameters");
    }
    AttackEffort e;
    e.frames_needed = frames_needed;
    if (mean_u_per_session == 0.0) {
        e.unbounded = true;
        e.scale = std::numeric_limits<double>::infinity();
        e.minutes = std::numeric_limits<double>::infinity();
        return e;
    }
    e.scale = session_size / mean_u_per_session;
    e.minutes = baseline_minutes * e.scale;
    return e;
}

}  // namespace arqsec::analysis
