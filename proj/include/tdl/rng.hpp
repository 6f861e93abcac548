#pragma once

#include <cstdint>
#include <initializer_list>

namespace tdl {

/// SplitMix64 finalizer; a bijection on 64-bit words with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: the i-th output is a pure function of (key, i), so a
/// stream keyed by e.g. (seed, l, trial) can be regenerated anywhere without
/// coordination between workers.
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(std::initializer_list<std::uint64_t> key_parts)
    {
        std::uint64_t k = 0x6a09e667f3bcc908ULL;
        for (auto part : key_parts)
            k = mix64(k ^ mix64(part));
        key_ = k;
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return UINT64_MAX; }

    result_type operator()() { return next(); }

    std::uint64_t next()
    {
        std::uint64_t x = key_ ^ (counter_++ * 0xd1b54a32d192ed03ULL);
        return mix64(mix64(x) ^ key_);
    }

    /// Exactly uniform on [0, bound) by rejecting the biased tail.
    std::uint64_t below(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

} // namespace tdl
