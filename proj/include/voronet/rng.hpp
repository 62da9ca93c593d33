#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "voronet/box.hpp"

namespace voronet {

// Named sub-stream labels. Every random draw in the library comes from a
// stream derived as derive_seed(user_seed, label, ...), so training data,
// validation data and Monte-Carlo integration never share a stream.
inline constexpr std::uint64_t kStreamTrain = 1;
inline constexpr std::uint64_t kStreamValidate = 2;
inline constexpr std::uint64_t kStreamMoment = 3;
inline constexpr std::uint64_t kStreamDiameter = 4;
inline constexpr std::uint64_t kStreamQueries = 5;
inline constexpr std::uint64_t kStreamValues = 6;

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
}  // namespace detail

/// Deterministically mixes a base seed with up to three stream labels.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream,
                                 std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t s = detail::splitmix64(base);
    s = detail::splitmix64(s ^ stream);
    s = detail::splitmix64(s ^ a);
    s = detail::splitmix64(s ^ b);
    return s;
}

/// mt19937_64 wrapper producing platform-stable uniform doubles in [0, 1).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {
        // 53 mantissa bits, the usual (x >> 11) * 2^-53 construction.
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

// Monte-Carlo work is split into fixed-size blocks with one RNG sub-stream
// per block, so results do not depend on how blocks are scheduled.
inline constexpr std::uint64_t kMcBlock = 65536;

/// Draws `count` points uniformly on `box` into a flat row-major array.
/// Block b uses stream derive_seed(seed, stream, b); identical output for
/// any worker count.
inline std::vector<double> draw_uniform(const AxisBox& box, std::size_t count,
                                        std::uint64_t seed, std::uint64_t stream) {
    const std::size_t d = box.dim();
    std::vector<double> pts(count * d);
    for (std::uint64_t block = 0; block * kMcBlock < count; ++block) {
        Rng rng(derive_seed(seed, stream, block));
        const std::size_t begin = static_cast<std::size_t>(block * kMcBlock);
        const std::size_t end = std::min<std::size_t>(begin + kMcBlock, count);
        for (std::size_t p = begin; p < end; ++p)
            for (std::size_t i = 0; i < d; ++i)
                pts[p * d + i] = rng.uniform(box.lo(i), box.hi(i));
    }
    return pts;
}

}  // namespace voronet
