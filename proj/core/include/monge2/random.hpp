#pragma once

#include <cstdint>

namespace monge2 {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based stream: the k-th draw of substream (seed, index) depends on
/// nothing else, so results do not depend on how work is split across threads.
class CounterRng {
public:
    constexpr CounterRng(std::uint64_t seed, std::uint64_t index) noexcept
        : key_(mix64(seed ^ mix64(index + 0x632be59bd9b4e019ULL))) {}

    constexpr std::uint64_t next() noexcept { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

    /// Uniform in [0, 1) with 53 random bits.
    constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    constexpr double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

} // namespace monge2
