#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace arqsec {

/// Fixed-width bit vector of at most 64 bits with modulo-2 addition.
///
/// Used for V values (24/48 bits), RFID key components (ell bits) and PRF
/// words (2*ell bits). Values are always kept masked to the width.
class BitWord {
  public:
    static constexpr unsigned kMaxWidth = 64;

    BitWord() = default;
    BitWord(unsigned width, std::uint64_t value);

    static BitWord zero(unsigned width) { return BitWord(width, 0); }
    static std::uint64_t mask(unsigned width);

    /// Parses lowercase or uppercase hex, optional "0x" prefix.
    static BitWord from_hex(unsigned width, std::string_view hex);

    unsigned width() const { return width_; }
    std::uint64_t value() const { return value_; }
    bool is_zero() const { return value_ == 0; }

    BitWord operator^(const BitWord& other) const;
    BitWord& operator^=(const BitWord& other);
    bool operator==(const BitWord& other) const = default;

    /// Concatenation with *this as the high part.
    BitWord concat(const BitWord& low) const;
    BitWord flip_bit(unsigned bit) const;
    unsigned hamming_distance(const BitWord& other) const;

    /// Zero-padded lowercase hex, ceil(width/4) digits.
    std::string hex() const;

  private:
    unsigned width_ = 0;
    std::uint64_t value_ = 0;
};

}  // namespace arqsec
