#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace sweeplab {

/// SplitMix64 finalizer; used to derive stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// xoshiro256** generator (period 2^256 - 1).
///
/// Satisfies UniformRandomBitGenerator, so it composes with <random>
/// distributions. Replicate streams are derived from (master seed, index)
/// by `Rng::stream`, which hashes both through SplitMix64; the same pair
/// always yields the same stream regardless of which thread consumes it.
class Rng {
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) noexcept { reseed(seed); }

    static Rng stream(std::uint64_t master_seed, std::uint64_t index) noexcept
    {
        std::uint64_t h = master_seed;
        std::uint64_t key = splitmix64(h);
        std::uint64_t c = index ^ 0x5851f42d4c957f2dULL;
        key ^= splitmix64(c);
        return Rng(key);
    }

    void reseed(std::uint64_t seed) noexcept
    {
        std::uint64_t sm = seed;
        for (auto& w : s_)
            w = splitmix64(sm);
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
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

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform_pos() noexcept
    {
        return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
    }

    /// Uniform integer on [0, bound), bound <= 2^32 (Lemire's method).
    std::uint32_t below(std::uint32_t bound) noexcept
    {
        return below_from(static_cast<std::uint32_t>((*this)() >> 32), bound);
    }

    /// Two independent uniform integers on [0, bound) from one 64-bit draw.
    /// Falls back to fresh draws only on Lemire rejection.
    void below_pair(std::uint32_t bound, std::uint32_t& a, std::uint32_t& b) noexcept
    {
        const std::uint64_t x = (*this)();
        a = below_from(static_cast<std::uint32_t>(x >> 32), bound);
        b = below_from(static_cast<std::uint32_t>(x), bound);
    }

    /// Uniform integer on [0, bound) for 64-bit bounds.
    std::uint64_t below64(std::uint64_t bound) noexcept
    {
        if (bound <= std::numeric_limits<std::uint32_t>::max())
            return below(static_cast<std::uint32_t>(bound));
        // rejection on the top multiple of bound
        const std::uint64_t limit = max() - max() % bound;
        std::uint64_t x;
        do {
            x = (*this)();
        } while (x >= limit);
        return x % bound;
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    double exponential(double rate) noexcept { return -std::log(uniform_pos()) / rate; }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }

    std::uint32_t below_from(std::uint32_t x, std::uint32_t bound) noexcept
    {
        std::uint64_t m = static_cast<std::uint64_t>(x) * bound;
        auto low = static_cast<std::uint32_t>(m);
        if (low < bound) {
            const std::uint32_t threshold = static_cast<std::uint32_t>(-bound) % bound;
            while (low < threshold) {
                x = static_cast<std::uint32_t>((*this)() >> 32);
                m = static_cast<std::uint64_t>(x) * bound;
                low = static_cast<std::uint32_t>(m);
            }
        }
        return static_cast<std::uint32_t>(m >> 32);
    }

    std::array<std::uint64_t, 4> s_{};
};

/// Bernoulli trial against a precomputed 64-bit threshold; P(true) = p to
/// within 2^-64. Cheaper than `Rng::bernoulli` in hot loops.
class BernoulliThreshold {
  public:
    explicit BernoulliThreshold(double p) noexcept
    {
        if (p <= 0.0) {
            threshold_ = 0;
            always_ = false;
        } else if (p >= 1.0) {
            always_ = true;
        } else {
            threshold_ = static_cast<std::uint64_t>(std::ldexp(p, 64));
        }
    }

    bool operator()(Rng& rng) const noexcept { return always_ || rng() < threshold_; }
    bool never() const noexcept { return !always_ && threshold_ == 0; }

  private:
    std::uint64_t threshold_ = 0;
    bool always_ = false;
};

} // namespace sweeplab
