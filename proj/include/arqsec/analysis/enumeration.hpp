#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace arqsec::analysis {

class EnumerationTooLarge : public std::runtime_error {
  public:
    explicit EnumerationTooLarge(std::size_t events)
        : std::runtime_error("enumeration over " + std::to_string(events) +
                             " independent events exceeds 2^24 patterns; use Monte-Carlo")
    {
    }
};

inline constexpr std::size_t kMaxEnumerationEvents = 24;

/// What Eve must capture for the pattern to count as an outage.
enum class EnumPredicate {
    AllInit,        // every init frame constituting V_0 (events: A on gamma_ae, B on gamma_be)
    AllFrames,      // every acknowledged frame (events: frames only)
    FramesAndAcks,  // every acknowledged frame and every ACK bit
    Bounded,        // every acknowledged frame and fewer than l missed ACK bits
};

/// Sums the probability of every Eve-side erasure pattern satisfying the
/// predicate. For the RFID predicates index i of gamma_ae / gamma_be is the
/// frame / ACK of the i-th acknowledged slot; for AllInit they are the
/// Alice and Bob init frames. Throws EnumerationTooLarge beyond 2^24 patterns.
double exact_outage_enumeration(const std::vector<double>& gamma_ae, const std::vector<double>& gamma_be,
                                EnumPredicate predicate, unsigned ell = 0);

}  // namespace arqsec::analysis
