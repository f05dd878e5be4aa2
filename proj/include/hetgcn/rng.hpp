#pragma once

#include <cstdint>
#include <string_view>

namespace hetgcn::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// One splitmix64 scramble of x. Stateless; the basis of every stream here.
inline std::uint64_t mix64(std::uint64_t x) {
    x += kGolden;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Derives an independent stream seed from a master seed and a stream name,
// so that e.g. the shuffle stream is unaffected by extra init draws.
inline std::uint64_t derive_stream(std::uint64_t master, std::string_view name) {
    return mix64(master ^ fnv1a64(name));
}

// Minimal deterministic generator. Not std::uniform_* based: those are
// implementation-defined, and bit-identical output across platforms is a
// contract of this project.
class SplitMix {
public:
    explicit SplitMix(std::uint64_t seed) : state_(mix64(seed)) {}

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix64(state_);
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    // Uniform integer in [0, n). Lemire multiply-shift; unbiased enough for
    // shuffling and sampling at the sizes used here.
    std::uint64_t bounded(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

private:
    std::uint64_t state_;
};

// Fisher-Yates with SplitMix. std::shuffle is implementation-defined in how it
// consumes the generator, so we roll our own.
template <typename Vec>
void shuffle(Vec& v, SplitMix& gen) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(gen.bounded(i));
        std::swap(v[i - 1], v[j]);
    }
}

}  // namespace hetgcn::rng
