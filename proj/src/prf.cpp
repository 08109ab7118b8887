#include "arqsec/rfid/prf.hpp"

#include <bit>
#include <stdexcept>

#include "arqsec/rng.hpp"

namespace arqsec::rfid {
namespace {

struct SipState {
    std::uint64_t v0, v1, v2, v3;

    void round()
    {
        v0 += v1;
        v1 = std::rotl(v1, 13);
        v1 ^= v0;
        v0 = std::rotl(v0, 32);
        v2 += v3;
        v3 = std::rotl(v3, 16);
        v3 ^= v2;
        v0 += v3;
        v3 = std::rotl(v3, 21);
        v3 ^= v0;
        v2 += v1;
        v1 = std::rotl(v1, 17);
        v1 ^= v2;
        v2 = std::rotl(v2, 32);
    }
};

std::uint64_t siphash24(std::uint64_t k0, std::uint64_t k1, std::uint64_t m)
{
    SipState s{k0 ^ 0x736f6d6570736575ULL, k1 ^ 0x646f72616e646f6dULL, k0 ^ 0x6c7967656e657261ULL,
               k1 ^ 0x7465646279746573ULL};
    s.v3 ^= m;
    s.round();
    s.round();
    s.v0 ^= m;
    const std::uint64_t tail = std::uint64_t{8} << 56;
    s.v3 ^= tail;
    s.round();
    s.round();
    s.v0 ^= tail;
    s.v2 ^= 0xff;
    for (int i = 0; i < 4; ++i) {
        s.round();
    }
    return s.v0 ^ s.v1 ^ s.v2 ^ s.v3;
}

}  // namespace

BitWord prf_eval(const BitWord& seed, const BitWord& input)
{
    const unsigned ell = seed.width();
    if (ell < 1 || ell > 32 || input.width() != 2 * ell) {
        throw std::invalid_argument("prf_eval: seed must be l bits (1..32) and input 2l bits");
    }
    const std::uint64_t s = seed.value() | (std::uint64_t{ell} << 32);
    const std::uint64_t out = siphash24(mix64(s ^ 0x243f6a8885a308d3ULL), mix64(s ^ 0x13198a2e03707344ULL),
                                        input.value());
    return BitWord(2 * ell, out);
}

}  // namespace arqsec::rfid
