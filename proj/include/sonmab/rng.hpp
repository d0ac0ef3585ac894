#ifndef SONMAB_RNG_HPP
#define SONMAB_RNG_HPP

#include <cstdint>
#include <cstddef>

namespace sonmab {

// xoshiro256** seeded through splitmix64. Hand-rolled so that streams are
// bit-identical across platforms and standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) {
        std::uint64_t x = seed;
        for (auto& w : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            std::uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n). Unbiased rejection sampling.
    std::size_t next_below(std::size_t n) {
        const std::uint64_t bound = n;
        const std::uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return static_cast<std::size_t>(r % bound);
        }
    }

    // Uniform in [lo, hi].
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Derives an independent stream; keeps per-component randomness decoupled.
    Rng split() { return Rng(next_u64() ^ 0xd1b54a32d192ed03ULL); }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

}  // namespace sonmab

#endif
