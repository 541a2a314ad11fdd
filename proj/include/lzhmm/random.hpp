#pragma once

#include <algorithm>
#include <cstdint>
#include <span>

namespace lzhmm {

// SplitMix64 stream. The only generator used for sampling, so experiments are bit-reproducible.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next() noexcept {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

// Inverse-CDF draw: first index i with u < cumulative[i]. Zero-width intervals are never chosen,
// equal boundaries resolve toward the lower index. `cumulative` is nondecreasing and ends near 1;
// rounding past the last boundary falls back to the last positive-width entry.
inline std::size_t sample_categorical(std::span<const double> cumulative, double u) noexcept {
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it != cumulative.end()) return static_cast<std::size_t>(it - cumulative.begin());
    std::size_t i = cumulative.size() - 1;
    while (i > 0 && cumulative[i] == cumulative[i - 1]) --i;
    return i;
}

} // namespace lzhmm
