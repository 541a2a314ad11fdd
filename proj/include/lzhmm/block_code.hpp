#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lzhmm/bits.hpp"
#include "lzhmm/entropy.hpp"
#include "lzhmm/symbols.hpp"

namespace lzhmm {

struct CodeEntry {
    std::uint64_t block = 0;  // base-|Σ| block index
    double probability = 0.0; // P_L(block)
    BitString codeword;
};

// Prefix-free code over the positive-probability blocks of Σ^L, stored in canonical order
// (by codeword length, then block index).
class BlockCode {
public:
    BlockCode(std::size_t L, Alphabet alphabet, std::vector<CodeEntry> canonical_entries);

    std::size_t block_length() const noexcept { return L_; }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<CodeEntry>& entries() const noexcept { return entries_; }
    std::uint32_t fingerprint() const noexcept { return fingerprint_; }

    // nullptr when the block has no codeword (zero model probability).
    const CodeEntry* find(std::uint64_t block) const;

    // Σ_γ P_L(γ) |codeword(γ)|
    double expected_length() const;

    // Binary decoding trie: child[node][bit], -1 if absent. leaf[node] is an entry index or -1.
    const std::vector<std::int32_t>& trie_children() const noexcept { return children_; }
    const std::vector<std::int32_t>& trie_leaves() const noexcept { return leaves_; }

private:
    std::size_t L_;
    Alphabet alphabet_;
    std::vector<CodeEntry> entries_;
    std::vector<std::pair<std::uint64_t, std::size_t>> by_block_;
    std::uint32_t fingerprint_ = 0;
    std::vector<std::int32_t> children_;
    std::vector<std::int32_t> leaves_;
};

// Smallest ℓ >= 0 with 2^-ℓ <= p, i.e. ⌈log2(1/p)⌉ evaluated exactly on the double p.
unsigned shannon_length(double p);

// Shannon code lengths with canonical codeword assignment.
BlockCode build_shannon_code(const BlockDistribution& dist, const Alphabet& alphabet);

// CRC-32 of the canonical serialization: L (u16), |Σ| (u16), each symbol as u16 length + bytes,
// entry count (u64), then (block u64, codeword length u16) per entry in canonical order. Big-endian.
std::uint32_t codebook_fingerprint(std::size_t L, const Alphabet& alphabet, std::span<const CodeEntry> entries);

struct KraftReport {
    bool prefix_free = true;
    double kraft_sum = 0.0;
    bool per_codeword_bound = true;  // |c| <= 1 + log2(1/P) for every entry
};
// Exhaustive invariant check (prefix-freeness via the sorted-codeword neighbor test).
KraftReport check_block_code(const BlockCode& code);

// Concatenated codewords of the n/L blocks. Throws on n % L != 0 or an unencodable block.
BitString ih_encode(std::span<const Symbol> x, const BlockCode& code);
void ih_encode(std::span<const Symbol> x, const BlockCode& code, BitString& out);

SymbolSeq ih_decode(BitReader& reader, const BlockCode& code, std::size_t n);
SymbolSeq ih_decode(const BitString& bits, const BlockCode& code, std::size_t n);

} // namespace lzhmm
