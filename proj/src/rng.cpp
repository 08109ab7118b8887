#include "arqsec/rng.hpp"

#include <stdexcept>

namespace arqsec {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}

std::uint64_t CounterRng::at(std::uint64_t index) const
{
    return mix64(key_ ^ mix64(index * kGolden + 0x632be59bd9b4e019ULL));
}

double CounterRng::uniform_at(std::uint64_t index) const
{
    return static_cast<double>(at(index) >> 11) * 0x1.0p-53;
}

double CounterRng::uniform()
{
    return uniform_at(counter_++);
}

std::uint64_t CounterRng::bits(unsigned width)
{
    if (width == 0 || width > 64) {
        throw std::invalid_argument("bit width must be in [1, 64]");
    }
    const std::uint64_t v = next();
    return width == 64 ? v : (v >> (64 - width));
}

std::uint64_t CounterRng::below(std::uint64_t bound)
{
    if (bound == 0) {
        throw std::invalid_argument("below() needs a positive bound");
    }
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    for (;;) {
        const std::uint64_t v = next();
        if (v < limit) {
            return v % bound;
        }
    }
}

CounterRng SeededRng::stream(std::uint32_t entity, Purpose purpose) const
{
    std::uint64_t k = mix64(seed_ ^ 0xa0761d6478bd642fULL);
    k = mix64(k ^ (trial_ * kGolden));
    k = mix64(k ^ ((std::uint64_t{entity} << 32) | static_cast<std::uint32_t>(purpose)));
    return CounterRng(k);
}

}  // namespace arqsec
