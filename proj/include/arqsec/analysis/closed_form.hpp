#pragma once

#include <cstdint>
#include <vector>

namespace arqsec::analysis {

/// Probability Eve captures every init frame constituting V_0: Alice's
/// frames on alice->eve (gamma_ae), Bob's on bob->eve (gamma_be).
double p0_closed(const std::vector<double>& gamma_ae, const std::vector<double>& gamma_be);
/// Scalar means with |A| = |B| = n/2.
double p0_closed(double gamma_ae, double gamma_be, unsigned n);

/// Upper bound on the mean number of useful data frames:
/// (s^(n+1) - s^(N+1)) / gamma, s = 1 - gamma; N - n at gamma = 0.
double useful_frames_bound(double gamma_e, std::uint64_t n, std::uint64_t big_n);

/// Eve must capture every acknowledged frame and every ACK bit.
double outage_blind(const std::vector<double>& gamma_ae, const std::vector<double>& gamma_be);
double outage_blind(double gamma_ae, double gamma_be, unsigned n);

/// Eve knows IDS and searches ACK patterns without limit.
double outage_knows_ids(const std::vector<double>& gamma_ae);
double outage_knows_ids(double gamma_ae, unsigned n);

/// Eve knows IDS but can only afford fewer than l missed ACKs.
/// `sum_bound_offset` shifts the upper summation index; it exists so the
/// validation suite can check that an off-by-one is caught.
double outage_bounded(double gamma_ae, double gamma_be, unsigned n, unsigned ell, int sum_bound_offset = 0);

}  // namespace arqsec::analysis
