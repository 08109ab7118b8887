#include "arqsec/analysis/enumeration.hpp"

#include <cmath>

namespace arqsec::analysis {
namespace {

struct Event {
    long double p_miss;
    bool is_frame;  // otherwise an ACK bit (or Bob's init frame)
};

/// Compensated (Neumaier) accumulator.
struct Sum {
    long double s = 0;
    long double c = 0;
    void add(long double x)
    {
        const long double t = s + x;
        c += std::fabs(s) >= std::fabs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    long double value() const { return s + c; }
};

struct Walker {
    const std::vector<Event>& events;
    EnumPredicate predicate;
    unsigned ell;
    Sum total;

    bool accept(unsigned missed_frames, unsigned missed_other) const
    {
        switch (predicate) {
        case EnumPredicate::AllInit:
        case EnumPredicate::FramesAndAcks: return missed_frames == 0 && missed_other == 0;
        case EnumPredicate::AllFrames: return missed_frames == 0;
        case EnumPredicate::Bounded: return missed_frames == 0 && missed_other < ell;
        }
        return false;
    }

    void walk(std::size_t i, long double prob, unsigned missed_frames, unsigned missed_other)
    {
        if (i == events.size()) {
            if (accept(missed_frames, missed_other)) {
                total.add(prob);
            }
            return;
        }
        const Event& e = events[i];
        walk(i + 1, prob * (1 - e.p_miss), missed_frames, missed_other);
        walk(i + 1, prob * e.p_miss, missed_frames + (e.is_frame ? 1 : 0), missed_other + (e.is_frame ? 0 : 1));
    }
};

}  // namespace

double exact_outage_enumeration(const std::vector<double>& gamma_ae, const std::vector<double>& gamma_be,
                                EnumPredicate predicate, unsigned ell)
{
    std::vector<Event> events;
    for (double g : gamma_ae) {
        events.push_back({g, true});
    }
    if (predicate != EnumPredicate::AllFrames) {
        if (predicate != EnumPredicate::AllInit && gamma_be.size() != gamma_ae.size()) {
            throw std::invalid_argument("frame and ACK index sets differ");
        }
        for (double g : gamma_be) {
            events.push_back({g, false});
        }
    }
    for (const auto& e : events) {
        if (!(e.p_miss >= 0 && e.p_miss <= 1)) {
            throw std::invalid_argument("erasure probability outside [0, 1]");
        }
    }
    if (events.size() > kMaxEnumerationEvents) {
        throw EnumerationTooLarge(events.size());
    }
    if (predicate == EnumPredicate::Bounded && ell == 0) {
        throw std::invalid_argument("bounded predicate needs l >= 1");
    }
    Walker w{events, predicate, ell, {}};
    w.walk(0, 1.0L, 0, 0);
    return static_cast<double>(w.total.value());
}

}  // namespace arqsec::analysis
