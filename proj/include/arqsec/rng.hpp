#pragma once

#include <cstdint>

namespace arqsec {

/// Substream purposes. Distinct purposes never share draws.
enum class Purpose : std::uint32_t {
    Erasure = 1,
    Fading = 2,
    HeaderV = 3,
    InitRandom = 4,
    ArqFrame = 5,
    ReaderNonce = 6,
    TagNonce = 7,
    Injection = 8,
    Rekey = 9,
    Multicast = 10,
    Provisioning = 11,
    Test = 99,
};

/// SplitMix64 output finalizer (a bijection on 64-bit words).
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator: draw i of a stream is a pure function of
/// (stream key, i). Advancing is explicit; copies are independent cursors.
class CounterRng {
  public:
    explicit CounterRng(std::uint64_t stream_key, std::uint64_t counter = 0)
        : key_(stream_key), counter_(counter)
    {
    }

    /// Draw at an absolute index without touching the cursor.
    std::uint64_t at(std::uint64_t index) const;
    double uniform_at(std::uint64_t index) const;

    std::uint64_t next() { return at(counter_++); }
    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform();
    bool bernoulli(double p) { return uniform() < p; }
    /// Uniform integer with the low `width` bits random.
    std::uint64_t bits(unsigned width);
    /// Uniform integer in [0, bound), bound > 0 (rejection sampling).
    std::uint64_t below(std::uint64_t bound);

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

/// Master seed plus trial index; hands out independent substreams keyed by
/// (trial, entity, purpose).
class SeededRng {
  public:
    explicit SeededRng(std::uint64_t seed, std::uint64_t trial = 0) : seed_(seed), trial_(trial) {}

    CounterRng stream(std::uint32_t entity, Purpose purpose) const;
    SeededRng for_trial(std::uint64_t trial) const { return SeededRng(seed_, trial); }

    std::uint64_t seed() const { return seed_; }
    std::uint64_t trial() const { return trial_; }

  private:
    std::uint64_t seed_;
    std::uint64_t trial_;
};

}  // namespace arqsec
