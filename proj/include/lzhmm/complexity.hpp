#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lzhmm/symbols.hpp"

namespace lzhmm {

inline constexpr std::size_t kDefaultComplexityCap = 24;

// Ordered nonempty pieces whose concatenation is the subject string.
struct Decomposition {
    std::vector<SymbolSeq> pieces;

    std::size_t size() const noexcept { return pieces.size(); }
    SymbolSeq concatenated() const;
    // Pieces nonempty and pairwise distinct.
    bool valid() const;
};

struct DistinctParse {
    std::size_t t = 0;
    Decomposition witness;
};

// C(X): the maximum number of pairwise-distinct nonempty pieces X can be cut into.
// Exact branch-and-bound search; throws CapacityError when |X| > n_cap.
DistinctParse max_distinct_parse(std::span<const Symbol> x, std::size_t alphabet_size,
                                 std::size_t n_cap = kDefaultComplexityCap);

// Pieces of lengths 1, 2, ..., s-1 and a final piece of the remaining n - s(s-1)/2 >= s symbols,
// s = ⌊√n⌋. Distinct lengths make the pieces distinct, so C(X) >= ⌊√n⌋.
Decomposition sqrt_parse(std::span<const Symbol> x);

// m (⌈log2(m+1)⌉ + 2⌈log2(log2(m+1) + 1)⌉ + 3 + ℓ): never below |lz_encode(X)| for a parse with m phrases.
std::uint64_t lz_length_bound(std::uint64_t m, std::size_t alphabet_size);

} // namespace lzhmm
