#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace r2v {

// SplitMix64 mixing step; used for seed derivation and integer hashing.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace stream {
// Stream tags keep the per-purpose RNG streams disjoint for one master seed.
inline constexpr std::uint64_t kWalk = 0x57414c4bULL;     // per-walk sampling
inline constexpr std::uint64_t kPass = 0x50415353ULL;     // per-pass start shuffle
inline constexpr std::uint64_t kSplit = 0x53504c54ULL;    // edge split
inline constexpr std::uint64_t kInit = 0x494e4954ULL;     // embedding init
inline constexpr std::uint64_t kTrain = 0x5452414eULL;    // negative sampling
inline constexpr std::uint64_t kMonitor = 0x4d4f4e49ULL;  // loss-monitor sample
inline constexpr std::uint64_t kEval = 0x4556414cULL;     // evaluation sampling
}  // namespace stream

// Deterministic stream seed derived from a master seed, a purpose tag and up
// to two indices (e.g. pass and start node). Distinct tuples give independent
// streams, which is what makes walk corpora worker-count invariant.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t h = splitmix64(master ^ 0x243f6a8885a308d3ULL);
    h = splitmix64(h ^ tag);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    return h;
}

// mt19937_64 with our own integer/real mappings. The raw engine output is
// fully specified by the standard; std::uniform_int_distribution is not, so
// bounded draws use Lemire reduction and reals use the top 53 bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Unbiased draw in [0, n); n must be >= 1.
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

    // Uniform double in [0, 1).
    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    template <class T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace r2v
