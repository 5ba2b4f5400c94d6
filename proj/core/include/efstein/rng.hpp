#pragma once

#include <cstdint>

namespace efstein {

/// Counter-based splittable RNG. A draw is a pure function of
/// (seed, stream, counter), so generation is reproducible bit-for-bit
/// across machines and across parallel schedules.
class SplitRng {
  public:
    explicit SplitRng(std::uint64_t seed, std::uint64_t stream = 0)
        : key_(mix(mix(seed) ^ (stream * 0x9E3779B97F4A7C15ULL + 0xD1B54A32D192ED03ULL))) {}

    /// Child generator on an independent stream; does not disturb this one.
    SplitRng split(std::uint64_t stream) const {
        SplitRng child(0);
        child.key_ = mix(key_ ^ (stream * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL));
        child.ctr_ = 0;
        return child;
    }

    std::uint64_t next_u64() { return mix(key_ + (++ctr_) * 0x9E3779B97F4A7C15ULL); }

    /// Uniform in [0,1), 53-bit mantissa.
    double unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1,1).
    double symmetric() { return 2.0 * unit() - 1.0; }

    bool coin(double p) { return unit() < p; }

    /// Uniform integer in [0,n), rejection-sampled (no modulo bias).
    std::uint64_t below(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = ~std::uint64_t(0) - (~std::uint64_t(0) % n);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

  private:
    // splitmix64 finalizer
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace efstein
