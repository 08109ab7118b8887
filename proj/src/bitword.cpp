#include "arqsec/bitword.hpp"

#include <bit>
#include <charconv>
#include <stdexcept>

namespace arqsec {

std::uint64_t BitWord::mask(unsigned width)
{
    if (width == 0 || width > kMaxWidth) {
        throw std::invalid_argument("BitWord width must be in [1, 64]");
    }
    return width == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << width) - 1);
}

BitWord::BitWord(unsigned width, std::uint64_t value)
    : width_(width), value_(value & mask(width))
{
}

BitWord BitWord::from_hex(unsigned width, std::string_view hex)
{
    if (hex.starts_with("0x") || hex.starts_with("0X")) {
        hex.remove_prefix(2);
    }
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(hex.data(), hex.data() + hex.size(), value, 16);
    if (hex.empty() || ec != std::errc{} || ptr != hex.data() + hex.size()) {
        throw std::invalid_argument("invalid hex word: " + std::string(hex));
    }
    if ((value & ~mask(width)) != 0) {
        throw std::invalid_argument("hex word exceeds width " + std::to_string(width));
    }
    return BitWord(width, value);
}

BitWord BitWord::operator^(const BitWord& other) const
{
    BitWord out = *this;
    out ^= other;
    return out;
}

BitWord& BitWord::operator^=(const BitWord& other)
{
    if (width_ != other.width_) {
        throw std::invalid_argument("BitWord width mismatch in xor");
    }
    value_ ^= other.value_;
    return *this;
}

BitWord BitWord::concat(const BitWord& low) const
{
    if (width_ + low.width_ > kMaxWidth) {
        throw std::invalid_argument("BitWord concat exceeds 64 bits");
    }
    return BitWord(width_ + low.width_, (value_ << low.width_) | low.value_);
}

BitWord BitWord::flip_bit(unsigned bit) const
{
    if (bit >= width_) {
        throw std::out_of_range("bit index outside BitWord");
    }
    return BitWord(width_, value_ ^ (std::uint64_t{1} << bit));
}

unsigned BitWord::hamming_distance(const BitWord& other) const
{
    if (width_ != other.width_) {
        throw std::invalid_argument("BitWord width mismatch in distance");
    }
    return static_cast<unsigned>(std::popcount(value_ ^ other.value_));
}

std::string BitWord::hex() const
{
    static constexpr char kDigits[] = "0123456789abcdef";
    const unsigned digits = (width_ + 3) / 4;
    std::string out(digits, '0');
    std::uint64_t v = value_;
    for (unsigned i = 0; i < digits; ++i) {
        out[digits - 1 - i] = kDigits[v & 0xF];
        v >>= 4;
    }
    return out;
}

}  // namespace arqsec
