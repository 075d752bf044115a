#pragma once

#include <cstdint>
#include <limits>

namespace nbmf {

/// SplitMix64 generator. Satisfies UniformRandomBitGenerator; substreams
/// are derived by hashing (seed, stream index) so that any partition of
/// trials across threads reproduces the serial result.
class SplitMix64
{
  public:
    using result_type = std::uint64_t;

    explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

    static SplitMix64 substream(std::uint64_t seed, std::uint64_t stream)
    {
        SplitMix64 mixer(seed ^ (stream * 0xD1B54A32D192ED03ull));
        mixer();
        return SplitMix64(mixer() ^ stream);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()()
    {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

  private:
    std::uint64_t state_;
};

} // namespace nbmf
