#pragma once

#include "arqsec/bitword.hpp"

namespace arqsec::rfid {

/// f_s: {0,1}^{2l} -> {0,1}^{2l} with an l-bit seed, 1 <= l <= 32.
/// SipHash-2-4 over one 64-bit block, truncated to 2l bits.
BitWord prf_eval(const BitWord& seed, const BitWord& input);

}  // namespace arqsec::rfid
